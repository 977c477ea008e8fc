//! Closed-form DoF bounds for the K-user MISO interference channel with
//! imperfect local delayed CSIT, and reference curves for comparison.

/// Achievable DoF per user of the RIA scheme,
/// `(2/(K+1))·(1+(K−1)ε)/K`.
pub fn inner_bound(users: usize, epsilon: f64) -> f64 {
    let k = users as f64;
    2.0 / (k + 1.0) * (1.0 + (k - 1.0) * epsilon) / k
}

/// Cooperative outer bound on the DoF per user: the inverse of the K-th
/// harmonic number.
pub fn outer_bound(users: usize) -> f64 {
    let harmonic: f64 = (1..=users).map(|i| 1.0 / i as f64).sum();
    1.0 / harmonic
}

/// DoF per user of TDMA without CSIT.
pub fn tdma_dof(users: usize) -> f64 {
    1.0 / users as f64
}

/// Feedback quality at which the inner bound meets TDMA.
///
/// Solving `(2/(K+1))(1+(K−1)ε)/K = 1/K` gives `1+(K−1)ε = (K+1)/2`, i.e.
/// `ε = 1/2` independent of `K`.
pub fn crossover_epsilon(users: usize) -> f64 {
    debug_assert!(users >= 2);
    let k = users as f64;
    ((k + 1.0) / 2.0 - 1.0) / (k - 1.0)
}

/// One stored comparison series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSeries {
    pub name: &'static str,
    pub source: &'static str,
    /// `(K, DoF per user)` for `K = 2..=10`.
    pub points: &'static [(usize, f64)],
}

/// Reference DoF-per-user curves at perfect feedback (ε = 1), `K = 2..=10`.
///
/// The `ghasemi_*` and `abdoli_siso_inner` series are plotted values of
/// earlier schemes, kept as data rather than re-derived.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceCurves;

const THM1_OUTER: &[(usize, f64)] = &[
    (2, 0.666666666666667),
    (3, 0.545454545454546),
    (4, 0.48),
    (5, 0.437956204379562),
    (6, 0.408163265306123),
    (7, 0.385674931129477),
    (8, 0.367936925098555),
    (9, 0.353485762379015),
    (10, 0.341417152147406),
];

const GHASEMI_OUTER: &[(usize, f64)] = &[
    (2, 0.666666666666667),
    (3, 0.714285714285714),
    (4, 0.769230769230769),
    (5, 0.80952380952381),
    (6, 0.838709677419355),
    (7, 0.86046511627907),
    (8, 0.87719298245614),
    (9, 0.89041095890411),
    (10, 0.901098901098901),
];

const THM1_INNER: &[(usize, f64)] = &[
    (2, 0.666666666666667),
    (3, 0.5),
    (4, 0.4),
    (5, 0.333333333333333),
    (6, 0.285714285714286),
    (7, 0.25),
    (8, 0.222222222222222),
    (9, 0.2),
    (10, 0.181818181818182),
];

const GHASEMI_INNER: &[(usize, f64)] = &[
    (2, 0.666666666666667),
    (3, 0.428571428571429),
    (4, 0.307692307692308),
    (5, 0.238095238095238),
    (6, 0.193548387096774),
    (7, 0.162790697674419),
    (8, 0.140350877192982),
    (9, 0.123287671232877),
    (10, 0.10989010989011),
];

const ABDOLI_SISO_INNER: &[(usize, f64)] = &[
    (2, 0.5),
    (3, 0.387096774193548),
    (4, 0.296052631578947),
    (5, 0.239111870196413),
    (6, 0.200596056854654),
    (7, 0.172832321888769),
    (8, 0.151863704422931),
    (9, 0.135460984743207),
    (10, 0.122274614750177),
];

const TDMA: &[(usize, f64)] = &[
    (2, 0.5),
    (3, 0.333333333333333),
    (4, 0.25),
    (5, 0.2),
    (6, 0.166666666666667),
    (7, 0.142857142857143),
    (8, 0.125),
    (9, 0.111111111111111),
    (10, 0.1),
];

const SERIES: &[ReferenceSeries] = &[
    ReferenceSeries {
        name: "thm1_outer",
        source: "inverse harmonic number, plotted",
        points: THM1_OUTER,
    },
    ReferenceSeries {
        name: "ghasemi_outer",
        source: "Ghasemi et al., MISO IC with delayed local CSIT, plotted",
        points: GHASEMI_OUTER,
    },
    ReferenceSeries {
        name: "thm1_inner",
        source: "RIA inner bound at eps = 1, plotted",
        points: THM1_INNER,
    },
    ReferenceSeries {
        name: "ghasemi_inner",
        source: "Ghasemi et al., MISO IC with delayed local CSIT, plotted",
        points: GHASEMI_INNER,
    },
    ReferenceSeries {
        name: "abdoli_siso_inner",
        source: "Abdoli et al., SISO IC with global delayed CSIT, plotted",
        points: ABDOLI_SISO_INNER,
    },
    ReferenceSeries {
        name: "tdma",
        source: "1/K, plotted",
        points: TDMA,
    },
];

impl ReferenceCurves {
    pub const K_RANGE: std::ops::RangeInclusive<usize> = 2..=10;

    pub fn all() -> &'static [ReferenceSeries] {
        SERIES
    }

    pub fn series(name: &str) -> Option<&'static ReferenceSeries> {
        SERIES.iter().find(|s| s.name == name)
    }

    /// Stored value of `name` at `users`, if that point exists.
    pub fn value(name: &str, users: usize) -> Option<f64> {
        Self::series(name)?
            .points
            .iter()
            .find(|(k, _)| *k == users)
            .map(|&(_, v)| v)
    }
}
