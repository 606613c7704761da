use std::collections::HashMap;

use super::{first_fit_color, AlgError, ColorMemo};
use crate::engine::{Decision, Delta, OnlineColorer, Rule, View};
use crate::graph::{Color, Graph, Vertex, VertexMask};

const EPS: f64 = 1e-9;

/// Least `m > prev` with `f(m) >= 2 f(prev)`. `f` must be nondecreasing.
pub fn next_phase_size<F: Fn(usize) -> f64>(f: &F, prev: usize) -> usize {
    let target = 2.0 * f(prev) - EPS;
    let mut hi = prev.max(1) * 2;
    while f(hi) < target {
        hi = hi.checked_mul(2).expect("bound function never doubles");
    }
    let mut lo = prev;
    // Invariant: f(lo) < target (or lo == prev), f(hi) >= target.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The first `count` phase sizes: `n_1 = 1`, then [`next_phase_size`].
pub fn phase_sizes<F: Fn(usize) -> f64>(f: F, count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut cur = 1;
    for _ in 0..count {
        out.push(cur);
        cur = next_phase_size(&f, cur);
    }
    out
}

type Factory = Box<dyn Fn(usize) -> Box<dyn OnlineColorer + Send> + Send>;
type BoundFn = Box<dyn Fn(usize) -> f64 + Send>;

struct Phase {
    size: usize,
    offset: Color,
    inner: Box<dyn OnlineColorer + Send>,
    graph: Graph,
    mask: VertexMask,
    prefix: Vec<Vertex>,
    local_of: HashMap<Vertex, Vertex>,
    global: Vec<Vertex>,
}

/// Colors without knowing `n` in advance. Vertices are cut into phases of
/// sizes `1, n_2, n_3, ...` (see [`phase_sizes`]); each phase runs a fresh
/// instance built for its size, sees only the phase's own vertices, and
/// colors above everything used by earlier phases.
pub struct UnknownN {
    factory: Factory,
    f: BoundFn,
    phase: Option<Phase>,
    phases_started: usize,
    max_color: Color,
}

impl UnknownN {
    pub fn new<M, F>(factory: M, f: F) -> Self
    where
        M: Fn(usize) -> Box<dyn OnlineColorer + Send> + Send + 'static,
        F: Fn(usize) -> f64 + Send + 'static,
    {
        UnknownN {
            factory: Box::new(factory),
            f: Box::new(f),
            phase: None,
            phases_started: 0,
            max_color: 0,
        }
    }

    fn open_phase(&mut self, size: usize) -> Delta {
        self.phases_started += 1;
        self.phase = Some(Phase {
            size,
            offset: self.max_color,
            inner: (self.factory)(size),
            graph: Graph::empty(size),
            mask: VertexMask::new(size),
            prefix: Vec::with_capacity(size),
            local_of: HashMap::with_capacity(size),
            global: Vec::with_capacity(size),
        });
        Delta::Phase {
            index: self.phases_started,
            size,
            offset: self.max_color,
        }
    }
}

impl OnlineColorer for UnknownN {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        let mut opened = None;
        match &self.phase {
            None => opened = Some(self.open_phase(1)),
            Some(p) if p.global.len() == p.size => {
                let f = &self.f;
                let next = next_phase_size(&|x| f(x), p.size);
                opened = Some(self.open_phase(next));
            }
            Some(_) => {}
        }
        let phase = self.phase.as_mut().expect("phase is open");
        let local = phase.global.len();
        for u in view.neighbors(v) {
            if let Some(&lu) = phase.local_of.get(&u) {
                phase.graph.add_edge(local, lu).expect("local ids in range");
            }
        }
        phase.local_of.insert(v, local);
        phase.global.push(v);
        phase.mask.insert(local);
        phase.prefix.push(local);

        let sub = View::new(&phase.graph, &phase.mask, &phase.prefix);
        let mut dec = phase.inner.step(&sub, local)?;
        let global = &phase.global;
        for delta in &mut dec.deltas {
            delta.map_vertices(|x| global[x]);
            delta.shift_colors(phase.offset);
        }
        dec.color += phase.offset;
        if let Some(delta) = opened {
            dec.deltas.insert(0, delta);
        }
        self.max_color = self.max_color.max(dec.color);
        Ok(dec)
    }

    fn palette_cap(&self) -> Option<Color> {
        None
    }
}

/// Makes any colorer safe on arbitrary inputs. The inner decision is kept
/// when it fits the inner palette cap and clashes with no revealed
/// neighbor; otherwise the vertex is colored by First Fit on an overflow
/// palette placed above the cap.
pub struct Robust<C> {
    inner: C,
    cap: Option<Color>,
    colors: ColorMemo,
}

impl<C: OnlineColorer> Robust<C> {
    pub fn new(inner: C) -> Self {
        let cap = inner.palette_cap();
        Robust {
            inner,
            cap,
            colors: ColorMemo::default(),
        }
    }

    /// First color of the overflow palette, minus one.
    pub fn overflow_base(&self) -> Color {
        self.cap.unwrap_or(0)
    }
}

impl<C: OnlineColorer> OnlineColorer for Robust<C> {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        let around: Vec<Color> = view.neighbors(v).filter_map(|u| self.colors.get(u)).collect();
        let attempt = self.inner.step(view, v);
        let fits = |c: Color| self.cap.is_none_or(|cap| c <= cap) && !around.contains(&c);
        let dec = match attempt {
            Ok(dec) if fits(dec.color) => dec,
            other => {
                let base = self.overflow_base();
                let color = base
                    + first_fit_color(around.iter().filter(|&&c| c > base).map(|&c| c - base));
                let (inner, mut deltas) = match other {
                    Ok(d) => (Some(d.color), d.deltas),
                    Err(_) => (None, Vec::new()),
                };
                deltas.push(Delta::Overflow { inner });
                Decision {
                    color,
                    rule: Rule::Overflow,
                    deltas,
                }
            }
        };
        self.colors.set(v, dec.color);
        Ok(dec)
    }

    fn palette_cap(&self) -> Option<Color> {
        None
    }
}
