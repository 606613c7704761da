use super::{a_palette_cap, first_fit_color, AlgError};
use crate::engine::{Decision, OnlineColorer, Rule, View};
use crate::graph::{Bipartition, Color, Vertex};

const NONE: usize = usize::MAX;

/// Colors present on one side of a component, as a growable bitset.
#[derive(Debug, Clone, Default)]
struct ColorSet(Vec<u64>);

impl ColorSet {
    fn insert(&mut self, c: Color) {
        let (word, bit) = ((c / 64) as usize, c % 64);
        if word >= self.0.len() {
            self.0.resize(word + 1, 0);
        }
        self.0[word] |= 1 << bit;
    }

    fn union_with(&mut self, other: &ColorSet) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    /// Least color `>= 1` in neither set.
    fn least_missing(sets: &[&ColorSet]) -> Color {
        let words = sets.iter().map(|s| s.0.len()).max().unwrap_or(0);
        for w in 0..=words {
            // Bit 0 stands for color 0, which is never free.
            let mut used = if w == 0 { 1u64 } else { 0 };
            for s in sets {
                used |= s.0.get(w).copied().unwrap_or(0);
            }
            if used != u64::MAX {
                return (w as u32) * 64 + used.trailing_ones();
            }
        }
        unreachable!("a word with a free bit always exists past the end")
    }
}

/// Algorithm A maintained incrementally: a union-find over the members of a
/// growing bipartite vertex set, where each vertex stores its side relative
/// to its parent and each root stores the colors present on either side.
/// [`probe`](Self::probe) gives the same answer as [`lovasz_color`] on the
/// members, in time proportional to the new vertex's degree.
#[derive(Debug, Clone, Default)]
pub(crate) struct ParityForest {
    parent: Vec<usize>,
    /// Side relative to the parent (for roots: 0).
    flip: Vec<bool>,
    size: Vec<usize>,
    /// Per root: colors on the side with parity 0 and parity 1.
    sides: Vec<[ColorSet; 2]>,
}

impl ParityForest {
    pub(crate) fn contains(&self, v: Vertex) -> bool {
        self.parent.get(v).is_some_and(|&p| p != NONE)
    }

    /// Root of `v` and the parity of `v` relative to it.
    fn find(&self, mut v: Vertex) -> (Vertex, bool) {
        let mut parity = false;
        while self.parent[v] != v {
            parity ^= self.flip[v];
            v = self.parent[v];
        }
        (v, parity)
    }

    /// Color Algorithm A gives a new vertex whose member neighbors are
    /// `nbrs`, or the two neighbors that would close an odd cycle.
    pub(crate) fn probe<I: IntoIterator<Item = Vertex>>(&self, nbrs: I) -> Result<Color, AlgError> {
        // For each touched component: the neighbor seen first and its side.
        let mut seen: Vec<(Vertex, bool, Vertex)> = Vec::new();
        for u in nbrs.into_iter().filter(|&u| self.contains(u)) {
            let (root, side) = self.find(u);
            match seen.iter().find(|(r, _, _)| *r == root) {
                Some(&(_, s, first)) if s != side => return Err(AlgError::OddCycle { u: first, v: u }),
                Some(_) => {}
                None => seen.push((root, side, u)),
            }
        }
        // The neighbors' sides form I_2.
        let sets: Vec<&ColorSet> = seen.iter().map(|&(r, s, _)| &self.sides[r][usize::from(s)]).collect();
        Ok(ColorSet::least_missing(&sets))
    }

    /// Adds `v` with `color`, joined to its member neighbors `nbrs`. The
    /// caller must have probed first: the union is assumed bipartite.
    pub(crate) fn insert<I: IntoIterator<Item = Vertex>>(&mut self, v: Vertex, color: Color, nbrs: I) {
        if v >= self.parent.len() {
            self.parent.resize(v + 1, NONE);
            self.flip.resize(v + 1, false);
            self.size.resize(v + 1, 0);
            self.sides.resize(v + 1, Default::default());
        }
        self.parent[v] = v;
        self.size[v] = 1;
        self.sides[v][0].insert(color);
        let nbrs: Vec<Vertex> = nbrs.into_iter().filter(|&u| u != v && self.contains(u)).collect();
        for u in nbrs {
            let (ru, pu) = self.find(u);
            let (rv, pv) = self.find(v);
            if ru == rv {
                continue;
            }
            // u and v must land on opposite sides.
            let flip = !(pu ^ pv);
            let (big, small) = if self.size[ru] >= self.size[rv] { (ru, rv) } else { (rv, ru) };
            self.parent[small] = big;
            self.flip[small] = flip;
            self.size[big] += self.size[small];
            let moved = std::mem::take(&mut self.sides[small]);
            let (same, other) = if flip { (1, 0) } else { (0, 1) };
            self.sides[big][same].union_with(&moved[0]);
            self.sides[big][other].union_with(&moved[1]);
        }
    }
}

/// One step of Algorithm A inside the revealed vertices accepted by
/// `allowed`: split the component of `v` into `(I_1, I_2)` with `v` in
/// `I_1`, then take the least color not already on `I_2`.
pub fn lovasz_color<F, C>(view: &View<'_>, v: Vertex, allowed: F, color_of: C) -> Result<Color, AlgError>
where
    F: Fn(Vertex) -> bool,
    C: Fn(Vertex) -> Option<Color>,
{
    match view.bipartition_within(v, allowed) {
        Bipartition::Sides(sides) => Ok(first_fit_color(
            sides.other.iter().filter_map(|&u| color_of(u)),
        )),
        Bipartition::OddCycle { u, v } => Err(AlgError::OddCycle { u, v }),
    }
}

/// Lovász's online algorithm for bipartite inputs.
#[derive(Debug)]
pub struct Lovasz {
    n: usize,
    forest: ParityForest,
}

impl Lovasz {
    pub fn new(n: usize) -> Self {
        Lovasz {
            n,
            forest: ParityForest::default(),
        }
    }
}

impl OnlineColorer for Lovasz {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        let c = self.forest.probe(view.neighbors(v))?;
        self.forest.insert(v, c, view.neighbors(v));
        Ok(Decision::new(c, Rule::A))
    }

    fn palette_cap(&self) -> Option<Color> {
        Some(a_palette_cap(self.n) as Color)
    }
}
