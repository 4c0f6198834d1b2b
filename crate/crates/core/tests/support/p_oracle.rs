// Two-tailed p-values 2 * integral of the Student-t density from |t| to
// infinity, df = n - 2, t = r * sqrt(df / (1 - r^2)), evaluated at the f64
// value of each r. Integrated with mpmath at 40 significant digits after the
// substitution t = sqrt(df) tan(theta), which turns the density into
// c * cos(theta)^(df - 1) on [atan(t / sqrt(df)), pi / 2]; Gauss-Legendre
// over 256 subintervals. Frozen here.

/// (r, n, p)
#[allow(clippy::excessive_precision)]
pub const P_GRID: &[(f64, usize, f64)] = &[
    (0.05, 3, 0.96815573352667930949),
    (0.1, 3, 0.93623143914148014853),
    (0.2, 3, 0.87181156630205012956),
    (0.3, 3, 0.80602663195864342641),
    (0.5, 3, 0.66666666666666666667),
    (0.7, 3, 0.50636662221326999818),
    (0.9, 3, 0.28713258625741250907),
    (0.99, 3, 0.090106827288824247814),
    (0.05, 4, 0.94999999999999999722),
    (0.1, 4, 0.89999999999999999445),
    (0.2, 4, 0.7999999999999999889),
    (0.3, 4, 0.7000000000000000111),
    (0.5, 4, 0.5),
    (0.7, 4, 0.30000000000000004441),
    (0.9, 4, 0.099999999999999977796),
    (0.99, 4, 0.010000000000000008882),
    (0.05, 5, 0.93636455854316667773),
    (0.1, 5, 0.87288857156953818968),
    (0.2, 5, 0.74706007810466194566),
    (0.3, 5, 0.62383766478107295179),
    (0.5, 5, 0.39100221895577064191),
    (0.7, 5, 0.18812040437418736719),
    (0.9, 5, 0.037386073468498633399),
    (0.99, 5, 0.0011986195114020064524),
    (0.05, 10, 0.89089802758789061897),
    (0.1, 10, 0.78342440624999998822),
    (0.2, 10, 0.57958399999999997851),
    (0.3, 10, 0.3996914687500000183),
    (0.5, 10, 0.14111328125),
    (0.7, 10, 0.024206343750000012886),
    (0.9, 10, 0.00038715624999999966684),
    (0.99, 10, 4.3227184375000153111e-8),
    (0.05, 20, 0.83418347902861479973),
    (0.1, 20, 0.67487123262621141721),
    (0.2, 20, 0.39787297935196157326),
    (0.3, 20, 0.19875771734455368317),
    (0.5, 20, 0.024769558804109692574),
    (0.7, 20, 0.00059005801748363170729),
    (0.9, 20, 6.5742845444972103107e-8),
    (0.99, 20, 9.159623478939134578e-17),
    (0.05, 30, 0.79302195781715156569),
    (0.1, 30, 0.59904802178074557519),
    (0.2, 30, 0.28930352872544015896),
    (0.3, 30, 0.10724594805795436374),
    (0.5, 30, 0.0048999336670680904149),
    (0.7, 30, 0.000016647910069881456634),
    (0.9, 30, 1.3166060700263889751e-11),
    (0.99, 30, 2.3040857723400385697e-25),
    (0.05, 50, 0.73022457310064085656),
    (0.1, 50, 0.48959255176117677127),
    (0.2, 50, 0.16375308124541755503),
    (0.3, 50, 0.03428618003292997269),
    (0.5, 50, 0.00021801247136157763406),
    (0.7, 50, 1.5382066283990456488e-8),
    (0.9, 50, 6.2070673940415782417e-19),
    (0.99, 50, 1.7207592265010956493e-42),
    (0.05, 100, 0.62128997784530270929),
    (0.1, 100, 0.32221736303061964339),
    (0.2, 100, 0.046036286460054138281),
    (0.3, 100, 0.0024257334625830340015),
    (0.5, 100, 1.1804920270376268913e-7),
    (0.7, 100, 5.3290414275307618103e-16),
    (0.9, 100, 4.0634052774905981283e-37),
    (0.99, 100, 3.5751688897818138752e-85),
    (0.05, 147, 0.54756098599996686829),
    (0.1, 147, 0.22816142902724702821),
    (0.2, 147, 0.015150490486716944335),
    (0.3, 147, 0.00022279614791789257317),
    (0.5, 147, 1.1350692060908369673e-10),
    (0.7, 147, 5.9050538007974438837e-23),
    (0.9, 147, 3.7601964764213958857e-54),
    (0.99, 147, 3.1021312036953968993e-125),
];

pub const GRID_R: [f64; 8] = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99];
pub const GRID_N: [usize; 9] = [3, 4, 5, 10, 20, 30, 50, 100, 147];
