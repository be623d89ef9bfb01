//! One-dimensional quadrature grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Trapezoid,
    CompositeGaussLegendre,
}

/// Nodes and weights of a composite rule on `[x_min, x_max]`.
///
/// For the trapezoid scheme each panel holds `points_per_panel` equal
/// intervals and neighbouring panels share endpoints, giving
/// `panels * points_per_panel + 1` nodes. Gauss–Legendre panels are
/// independent and contribute `points_per_panel` interior nodes each.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: (f64, f64),
    scheme: Scheme,
    panels: usize,
    points_per_panel: usize,
}

impl QuadratureGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn points_per_panel(&self) -> usize {
        self.points_per_panel
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same rule with twice the resolution.
    pub fn refined(&self) -> QuadratureGrid {
        match self.scheme {
            Scheme::Trapezoid => build_grid(
                self.domain,
                self.points_per_panel * 2,
                self.panels,
                Scheme::Trapezoid,
            ),
            Scheme::CompositeGaussLegendre => build_grid(
                self.domain,
                self.points_per_panel,
                self.panels * 2,
                Scheme::CompositeGaussLegendre,
            ),
        }
        .expect("refining a valid grid yields a valid grid")
    }

    /// The rule at half resolution, if one exists.
    pub fn coarsened(&self) -> Option<QuadratureGrid> {
        match self.scheme {
            Scheme::Trapezoid => {
                if self.points_per_panel % 2 == 0 && self.points_per_panel >= 2 {
                    build_grid(self.domain, self.points_per_panel / 2, self.panels, self.scheme).ok()
                } else if self.panels % 2 == 0 {
                    build_grid(self.domain, self.points_per_panel, self.panels / 2, self.scheme).ok()
                } else {
                    None
                }
            }
            Scheme::CompositeGaussLegendre => {
                if self.panels % 2 == 0 {
                    build_grid(self.domain, self.points_per_panel, self.panels / 2, self.scheme).ok()
                } else if self.points_per_panel >= 4 {
                    build_grid(self.domain, self.points_per_panel / 2, self.panels, self.scheme).ok()
                } else {
                    None
                }
            }
        }
    }

    /// Weights of the half-resolution rule laid out on this grid's nodes,
    /// for the nested (trapezoid) case. Nodes absent from the coarse rule get
    /// weight zero.
    pub(crate) fn nested_coarse_weights(&self) -> Option<Vec<f64>> {
        if self.scheme != Scheme::Trapezoid {
            return None;
        }
        let intervals = self.nodes.len() - 1;
        if intervals % 2 != 0 {
            return None;
        }
        let h2 = 2.0 * (self.domain.1 - self.domain.0) / intervals as f64;
        let mut w = vec![0.0; self.nodes.len()];
        for (i, wi) in w.iter_mut().enumerate() {
            if i % 2 == 0 {
                *wi = if i == 0 || i == intervals { 0.5 * h2 } else { h2 };
            }
        }
        Some(w)
    }
}

/// Builds a composite quadrature grid on `domain`.
pub fn build_grid(
    domain: (f64, f64),
    points_per_panel: usize,
    panels: usize,
    scheme: Scheme,
) -> Result<QuadratureGrid> {
    let (lo, hi) = domain;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Argument(format!("empty or invalid domain ({lo}, {hi})")));
    }
    if points_per_panel < 2 {
        return Err(Error::Argument(format!(
            "points_per_panel must be at least 2, got {points_per_panel}"
        )));
    }
    if panels == 0 {
        return Err(Error::Argument("panels must be positive".into()));
    }
    let width = (hi - lo) / panels as f64;
    let (nodes, weights) = match scheme {
        Scheme::Trapezoid => {
            let intervals = panels * points_per_panel;
            let h = (hi - lo) / intervals as f64;
            let mut nodes = Vec::with_capacity(intervals + 1);
            let mut weights = Vec::with_capacity(intervals + 1);
            for i in 0..=intervals {
                // Anchor both ends exactly and keep the grid mirror-symmetric.
                let x = if 2 * i == intervals {
                    0.5 * (lo + hi)
                } else if 2 * i < intervals {
                    lo + i as f64 * h
                } else {
                    hi - (intervals - i) as f64 * h
                };
                nodes.push(x);
                weights.push(if i == 0 || i == intervals { 0.5 * h } else { h });
            }
            (nodes, weights)
        }
        Scheme::CompositeGaussLegendre => {
            let (ref_nodes, ref_weights) = gauss_legendre(points_per_panel);
            let mut nodes = Vec::with_capacity(panels * points_per_panel);
            let mut weights = Vec::with_capacity(panels * points_per_panel);
            for p in 0..panels {
                let a = lo + p as f64 * width;
                let b = if p + 1 == panels { hi } else { lo + (p + 1) as f64 * width };
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                for (t, w) in ref_nodes.iter().zip(&ref_weights) {
                    nodes.push(mid + half * t);
                    weights.push(half * w);
                }
            }
            (nodes, weights)
        }
    };
    Ok(QuadratureGrid {
        nodes,
        weights,
        domain,
        scheme,
        panels,
        points_per_panel,
    })
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
///
/// Newton iteration on `P_n` from the Tricomi initial guesses; converges to
/// machine precision in a handful of steps for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
