//! Color-count bounds and the slack added to absorb integer rounding of
//! palette sizes. All slack values live in [`slack`].

use thiserror::Error;

use crate::algorithms::{bo_palette_width, AlgKind, AlgSpec};
use crate::graph::{girth, oddgirth, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the odd-girth bound needs d >= 2, got {0}")]
pub struct DegenerateBound(pub u32);

/// `(d+1) n^(1/(d+1))`.
pub fn bound_bnd(n: usize, d: u32) -> f64 {
    let e = f64::from(d) + 1.0;
    e * (n as f64).powf(1.0 / e)
}

/// `4 (n log2 d / d)^(1/2)`.
pub fn bound_bo(n: usize, d: u32) -> Result<f64, DegenerateBound> {
    if d < 2 {
        return Err(DegenerateBound(d));
    }
    let d = f64::from(d);
    Ok(4.0 * (n as f64 * d.log2() / d).sqrt())
}

/// `2 log2 n`, raised to 1 where it degenerates (`n = 1`).
pub fn bound_a(n: usize) -> f64 {
    (2.0 * (n.max(1) as f64).log2()).max(1.0)
}

/// `2 (2n / d)^(1/2)`: colors after the offline two-coloring of H-classes.
pub fn bound_offline(n: usize, d: u32) -> f64 {
    2.0 * (2.0 * n as f64 / f64::from(d.max(1))).sqrt()
}

/// Additive slack per algorithm.
pub fn slack(spec: &AlgSpec) -> f64 {
    if spec.unknown_n {
        return 0.0;
    }
    match spec.kind {
        AlgKind::Ff | AlgKind::A => 0.0,
        AlgKind::Bnd => f64::from(spec.d) + 3.0,
        AlgKind::Bo => 2.0 * bo_palette_width(spec.d as usize) as f64 + 2.0,
        AlgKind::BoOffline => 4.0,
    }
}

/// A bound to compare a color count against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub bound: f64,
    pub slack: f64,
    /// `colors < bound + slack` rather than `<=`.
    pub strict: bool,
}

impl BoundCheck {
    pub fn admits(&self, colors: f64) -> bool {
        let limit = self.bound + self.slack;
        if self.strict {
            colors < limit
        } else {
            colors <= limit + 1e-9
        }
    }

    pub fn limit(&self) -> f64 {
        self.bound + self.slack
    }
}

/// The color bound that applies to a run of `spec` on `g`. For First Fit
/// this is `max degree + 1`; for the offline variant it bounds the colors
/// after the finishing step.
pub fn color_bound(spec: &AlgSpec, g: &Graph) -> BoundCheck {
    let n = g.n();
    let slack = slack(spec);
    if spec.unknown_n {
        let f = spec.bound_fn();
        return BoundCheck {
            bound: 4.0 * f(n).max(1.0),
            slack,
            strict: false,
        };
    }
    let (bound, strict) = match spec.kind {
        AlgKind::Ff => (g.max_degree() as f64 + 1.0, false),
        AlgKind::A => (bound_a(n), false),
        AlgKind::Bnd => (bound_bnd(n, spec.d), true),
        AlgKind::Bo => (bound_bo(n, spec.d).unwrap_or(f64::INFINITY), false),
        AlgKind::BoOffline => (bound_offline(n, spec.d), false),
    };
    BoundCheck {
        bound,
        slack,
        strict,
    }
}

/// Structural requirement an algorithm's guarantees rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    None,
    Bipartite,
    GirthAtLeast(usize),
    OddGirthAtLeast(usize),
}

impl Precondition {
    pub fn for_alg(spec: &AlgSpec) -> Self {
        let need = 4 * spec.d as usize + 1;
        match spec.kind {
            AlgKind::Ff => Precondition::None,
            AlgKind::A => Precondition::Bipartite,
            AlgKind::Bnd => Precondition::GirthAtLeast(need),
            AlgKind::Bo | AlgKind::BoOffline => Precondition::OddGirthAtLeast(need),
        }
    }

    pub fn holds(&self, g: &Graph) -> bool {
        match *self {
            Precondition::None => true,
            Precondition::Bipartite => oddgirth(g).is_bipartite(),
            Precondition::GirthAtLeast(k) => girth(g).at_least(k),
            Precondition::OddGirthAtLeast(k) => oddgirth(g).at_least(k),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Precondition::None => "none".into(),
            Precondition::Bipartite => "bipartite".into(),
            Precondition::GirthAtLeast(k) => format!("girth >= {k}"),
            Precondition::OddGirthAtLeast(k) => format!("oddgirth >= {k}"),
        }
    }
}
