//! Closed-form ratio bounds and the error constants between them.

use serde::Serialize;

/// `1 + 2/s + 2/(s-1)`.
pub fn euclidean_spanning(s: f64) -> f64 {
    1.0 + 2.0 / s + 2.0 / (s - 1.0)
}

/// `1 + 4/s + 1/(s-1)`.
pub fn euclidean_routing(s: f64) -> f64 {
    1.0 + 4.0 / s + 1.0 / (s - 1.0)
}

/// `1 + (2 + 2τ/(τ-1))/s`, valid for `s ≤ τ`.
pub fn doubling_spanning_le(s: f64, tau: f64) -> f64 {
    1.0 + (2.0 + 2.0 * tau / (tau - 1.0)) / s
}

/// `1 + (2 + τ/(τ-1))/s + 1/(s-1)`.
pub fn doubling_routing(s: f64, tau: f64) -> f64 {
    1.0 + (2.0 + tau / (tau - 1.0)) / s + 1.0 / (s - 1.0)
}

/// Spanning bound used in the doubling error analysis for this `s`.
pub fn doubling_spanning(s: f64, tau: f64) -> f64 {
    if s <= tau {
        doubling_spanning_le(s, tau)
    } else {
        euclidean_spanning(s)
    }
}

/// Δ(s) = 2/s − 1/(s−1).
pub fn euclidean_abs_error(s: f64) -> f64 {
    2.0 / s - 1.0 / (s - 1.0)
}

/// δ(s) = (s−2)/(s²+3s−2).
pub fn euclidean_rel_error(s: f64) -> f64 {
    (s - 2.0) / (s * s + 3.0 * s - 2.0)
}

/// R − S with the case split at `s = τ`.
pub fn doubling_abs_error(s: f64, tau: f64) -> f64 {
    doubling_routing(s, tau) - doubling_spanning(s, tau)
}

/// R/S − 1 with the case split at `s = τ`.
pub fn doubling_rel_error(s: f64, tau: f64) -> f64 {
    doubling_routing(s, tau) / doubling_spanning(s, tau) - 1.0
}

/// The printed rational form for the `s ≤ τ` relative error. It does not
/// agree with R/S − 1; kept so the disagreement stays visible.
pub fn doubling_rel_error_le_printed(s: f64, tau: f64) -> f64 {
    (s - tau) / ((s * s + 3.0 * s - 4.0) * (1.0 - tau) + 2.0 * s + 2.0)
}

/// The printed rational form for `s > τ`; exactly twice R/S − 1.
pub fn doubling_rel_error_gt_printed(s: f64, tau: f64) -> f64 {
    2.0 * (s - tau) / ((s * s + 3.0 * s - 2.0) * (tau - 1.0))
}

pub const EUCLIDEAN_ABS_CAP: f64 = 0.1716;
pub const EUCLIDEAN_REL_CAP: f64 = 0.0790;
pub const DOUBLING_ABS_CAP: f64 = 0.5;
pub const DOUBLING_REL_CAP: f64 = 1.0 / 6.0;

/// Every bound the harness checks for one parameter choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub s: f64,
    pub tau: Option<f64>,
    /// `BuildPath` length over distance.
    pub spanning: f64,
    /// Graph distance over distance, when a sharper bound than `spanning`
    /// exists.
    pub shortest: Option<f64>,
    pub routing: f64,
    /// Ascending-stage length over distance.
    pub ascending: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

impl Bounds {
    pub fn euclidean(s: f64) -> Self {
        Self {
            s,
            tau: None,
            spanning: euclidean_spanning(s),
            shortest: None,
            routing: euclidean_routing(s),
            ascending: 2.0 / s,
            abs_error: EUCLIDEAN_ABS_CAP,
            rel_error: EUCLIDEAN_REL_CAP,
        }
    }

    pub fn doubling(s: f64, tau: f64) -> Self {
        Self {
            s,
            tau: Some(tau),
            spanning: euclidean_spanning(s),
            shortest: (s <= tau).then(|| doubling_spanning_le(s, tau)),
            routing: doubling_routing(s, tau),
            ascending: tau / (s * (tau - 1.0)),
            abs_error: DOUBLING_ABS_CAP,
            rel_error: DOUBLING_REL_CAP,
        }
    }
}

/// Largest value of `f` on the grid `lo, lo + step, ..., ≤ hi`.
pub fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = ((hi - lo) / step).floor() as usize;
    let mut best = (lo, f(lo));
    for i in 1..=steps {
        let s = lo + i as f64 * step;
        let v = f(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub argmax: f64,
    pub max: f64,
    pub grid_argmax: f64,
    pub grid_max: f64,
}

impl Extremum {
    fn new(argmax: f64, max: f64, grid: (f64, f64)) -> Self {
        Self {
            argmax,
            max,
            grid_argmax: grid.0,
            grid_max: grid.1,
        }
    }

    pub fn agrees(&self, arg_tol: f64, val_tol: f64) -> bool {
        (self.argmax - self.grid_argmax).abs() <= arg_tol && (self.max - self.grid_max).abs() <= val_tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingRow {
    pub tau: f64,
    /// Δ at s → 2, `(τ−2)/(2(τ−1))`.
    pub abs_sup: f64,
    pub grid_abs_max: f64,
    pub grid_rel_max: f64,
    pub grid_rel_argmax: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBoundTable {
    pub grid: [f64; 3],
    pub euclidean_abs: Extremum,
    pub euclidean_rel: Extremum,
    pub doubling_abs_cap: f64,
    pub doubling_rel_cap: f64,
    pub doubling: Vec<DoublingRow>,
}

pub const GRID: [f64; 3] = [2.01, 100.0, 1e-4];

/// Closed-form maxima next to a grid re-maximization.
pub fn error_bound_table() -> ErrorBoundTable {
    let [lo, hi, step] = GRID;
    let r2 = std::f64::consts::SQRT_2;
    let euclidean_abs = Extremum::new(
        2.0 + r2,
        3.0 - 2.0 * r2,
        grid_argmax(euclidean_abs_error, lo, hi, step),
    );
    let euclidean_rel = Extremum::new(
        2.0 + 2.0 * r2,
        (7.0 - 4.0 * r2) / 17.0,
        grid_argmax(euclidean_rel_error, lo, hi, step),
    );
    let doubling = [11.0, 16.0, 32.0, 100.0]
        .into_iter()
        .map(|tau| {
            let abs = grid_argmax(|s| doubling_abs_error(s, tau), lo, hi, step);
            let rel = grid_argmax(|s| doubling_rel_error(s, tau), lo, hi, step);
            DoublingRow {
                tau,
                abs_sup: (tau - 2.0) / (2.0 * (tau - 1.0)),
                grid_abs_max: abs.1,
                grid_rel_max: rel.1,
                grid_rel_argmax: rel.0,
            }
        })
        .collect();
    ErrorBoundTable {
        grid: GRID,
        euclidean_abs,
        euclidean_rel,
        doubling_abs_cap: DOUBLING_ABS_CAP,
        doubling_rel_cap: DOUBLING_REL_CAP,
        doubling,
    }
}
