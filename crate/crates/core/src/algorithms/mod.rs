//! Online coloring algorithms. Every algorithm implements
//! [`OnlineColorer`](crate::engine::OnlineColorer) and keeps its own record
//! of the colors it assigned; the engine only hands it the revealed graph.

mod bnd;
mod bo;
mod ff;
mod lovasz;
mod offline;
mod params;
mod wrappers;

pub use bnd::HighGirth;
pub use bo::{HighOddGirth, OddGirthMode};
pub use ff::{first_fit_color, FirstFit};
pub use lovasz::{lovasz_color, Lovasz};
pub(crate) use lovasz::ParityForest;
pub use offline::{offline_bipartite_finish, FinishError};
pub use params::{
    a_palette_cap, bnd_class_cap, bnd_palette, bo_class_cap, bo_classes, bo_palette_width,
    offline_classes, witness_lower_bound,
};
pub use wrappers::{next_phase_size, phase_sizes, Robust, UnknownN};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::OnlineColorer;
use crate::graph::{Color, Vertex};
use crate::verify::bounds;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("{alg} needs d >= {min}, got {got}")]
    InvalidD { alg: &'static str, min: u32, got: u32 },
    #[error("odd cycle through edge {u}-{v}")]
    OddCycle { u: Vertex, v: Vertex },
    #[error("unknown algorithm `{0}`")]
    UnknownAlg(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgKind {
    /// First Fit.
    Ff,
    /// Lovász's online bipartite algorithm.
    A,
    /// High-girth algorithm with radius `d`.
    Bnd,
    /// High-oddgirth algorithm with radius `d`.
    Bo,
    /// Offline variant of `Bo`: H-classes only need to stay bipartite.
    BoOffline,
}

impl AlgKind {
    pub fn id(self) -> &'static str {
        match self {
            AlgKind::Ff => "ff",
            AlgKind::A => "a",
            AlgKind::Bnd => "bnd",
            AlgKind::Bo => "bo",
            AlgKind::BoOffline => "bo-offline",
        }
    }

    pub fn uses_d(self) -> bool {
        matches!(self, AlgKind::Bnd | AlgKind::Bo | AlgKind::BoOffline)
    }
}

impl FromStr for AlgKind {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ff" => AlgKind::Ff,
            "a" => AlgKind::A,
            "bnd" => AlgKind::Bnd,
            "bo" => AlgKind::Bo,
            "bo-offline" => AlgKind::BoOffline,
            other => return Err(AlgError::UnknownAlg(other.to_string())),
        })
    }
}

/// Algorithm id plus parameters. `d` is ignored by `ff` and `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgSpec {
    pub kind: AlgKind,
    pub d: u32,
    pub robust: bool,
    pub unknown_n: bool,
}

const UNKNOWN_N_SUFFIX: &str = "-unknown-n";
const ROBUST_SUFFIX: &str = "-robust";

impl AlgSpec {
    pub fn new(kind: AlgKind, d: u32) -> Self {
        AlgSpec {
            kind,
            d,
            robust: false,
            unknown_n: false,
        }
    }

    pub fn robust(mut self) -> Self {
        self.robust = true;
        self
    }

    pub fn unknown_n(mut self) -> Self {
        self.unknown_n = true;
        self
    }

    /// Same algorithm without the robust or unknown-n wrappers.
    pub fn base(self) -> Self {
        AlgSpec::new(self.kind, self.d)
    }

    /// Id as used on the command line and in traces, e.g. `bnd-robust`.
    pub fn id(&self) -> String {
        let mut id = self.kind.id().to_string();
        if self.unknown_n {
            id.push_str(UNKNOWN_N_SUFFIX);
        }
        if self.robust {
            id.push_str(ROBUST_SUFFIX);
        }
        id
    }

    pub fn from_id(id: &str, d: u32) -> Result<Self, AlgError> {
        let (rest, robust) = match id.strip_suffix(ROBUST_SUFFIX) {
            Some(r) => (r, true),
            None => (id, false),
        };
        let (rest, unknown_n) = match rest.strip_suffix(UNKNOWN_N_SUFFIX) {
            Some(r) => (r, true),
            None => (rest, false),
        };
        let kind = rest
            .parse()
            .map_err(|_| AlgError::UnknownAlg(id.to_string()))?;
        Ok(AlgSpec {
            kind,
            d,
            robust,
            unknown_n,
        })
    }

    pub fn validate(&self) -> Result<(), AlgError> {
        let min = match self.kind {
            AlgKind::Ff | AlgKind::A => return Ok(()),
            AlgKind::Bnd | AlgKind::BoOffline => 1,
            AlgKind::Bo => 2,
        };
        if self.d < min {
            return Err(AlgError::InvalidD {
                alg: self.kind.id(),
                min,
                got: self.d,
            });
        }
        Ok(())
    }

    /// The bound function `f(n)` this algorithm is known to honor.
    pub fn bound_fn(&self) -> impl Fn(usize) -> f64 + Send + Sync + 'static {
        let (kind, d) = (self.kind, self.d);
        move |n| match kind {
            AlgKind::Ff => n as f64,
            AlgKind::A => bounds::bound_a(n),
            AlgKind::Bnd => bounds::bound_bnd(n, d),
            AlgKind::Bo => bounds::bound_bo(n, d).unwrap_or(f64::INFINITY),
            AlgKind::BoOffline => bounds::bound_offline(n, d),
        }
    }

    /// Size of the unknown-n phase that follows one of size `prev`.
    pub fn next_phase(&self, prev: usize) -> usize {
        let f = self.bound_fn();
        next_phase_size(&|x| f(x).max(1.0), prev)
    }

    /// Instantiates the colorer for an input with `n` vertices. With
    /// `unknown_n` set, `n` is not consulted.
    pub fn build(&self, n: usize) -> Result<Box<dyn OnlineColorer + Send>, AlgError> {
        self.validate()?;
        let base = self.base();
        let mut colorer: Box<dyn OnlineColorer + Send> = if self.unknown_n {
            let f = self.bound_fn();
            Box::new(UnknownN::new(
                move |size| base.build_base(size),
                move |x| f(x).max(1.0),
            ))
        } else {
            base.build_base(n)
        };
        if self.robust {
            colorer = Box::new(Robust::new(colorer));
        }
        Ok(colorer)
    }

    fn build_base(&self, n: usize) -> Box<dyn OnlineColorer + Send> {
        let d = self.d as usize;
        match self.kind {
            AlgKind::Ff => Box::new(FirstFit::new()),
            AlgKind::A => Box::new(Lovasz::new(n)),
            AlgKind::Bnd => Box::new(HighGirth::new(n, d)),
            AlgKind::Bo => Box::new(HighOddGirth::new(n, d, OddGirthMode::Online)),
            AlgKind::BoOffline => Box::new(HighOddGirth::new(n, d, OddGirthMode::Offline)),
        }
    }
}

impl fmt::Display for AlgSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.uses_d() {
            write!(f, "{}(d={})", self.id(), self.d)
        } else {
            f.write_str(&self.id())
        }
    }
}

/// Per-vertex color table that grows on demand. 0 means uncolored.
#[derive(Debug, Clone, Default)]
pub(crate) struct ColorMemo(Vec<Color>);

impl ColorMemo {
    pub(crate) fn get(&self, v: Vertex) -> Option<Color> {
        self.0.get(v).copied().filter(|&c| c != 0)
    }

    pub(crate) fn set(&mut self, v: Vertex, c: Color) {
        if v >= self.0.len() {
            self.0.resize(v + 1, 0);
        }
        self.0[v] = c;
    }
}
