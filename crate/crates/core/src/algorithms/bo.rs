use std::collections::HashMap;

use super::{
    a_palette_cap, bo_class_cap, bo_classes, bo_palette_width, offline_classes, AlgError,
    ColorMemo, ParityForest,
};
use crate::engine::{Decision, Delta, OnlineColorer, Rule, View};
use crate::graph::{Color, Vertex};

/// How the H-classes are admitted and colored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddGirthMode {
    /// A vertex joins `H_i` when `H_i ∪ {v}` stays bipartite and Algorithm A
    /// colors it within the class's block of `ceil(2 log2 d)` colors.
    Online,
    /// Only bipartiteness is required. The online colors are provisional;
    /// [`offline_bipartite_finish`](super::offline_bipartite_finish)
    /// recolors each H-class with two colors afterwards.
    Offline,
}

#[derive(Debug, Clone)]
struct WitnessClass {
    color: Color,
}

/// Online coloring for graphs of oddgirth at least `4d + 1`, `d >= 2`.
///
/// Step 1 tries the bipartite classes `H_1..H_r` in order, each colored by
/// its own instance of Algorithm A inside a private palette block. A vertex
/// no class accepts reuses the first witness class at odd view-distance at
/// most `d`, or opens a class whose witnesses are the H-vertices at odd
/// distance at most `d`. Witness-class colors sit above all H-blocks.
#[derive(Debug)]
pub struct HighOddGirth {
    d: usize,
    n: usize,
    mode: OddGirthMode,
    r: usize,
    /// Block width: `B` online, the Algorithm A cap on `n` vertices offline.
    width: usize,
    h_of: HashMap<Vertex, usize>,
    /// Algorithm A state for each H-class.
    forests: Vec<ParityForest>,
    classes: Vec<WitnessClass>,
    class_of: HashMap<Vertex, usize>,
    colors: ColorMemo,
}

impl HighOddGirth {
    pub fn new(n: usize, d: usize, mode: OddGirthMode) -> Self {
        let (r, width) = match mode {
            OddGirthMode::Online => {
                assert!(d >= 2, "odd-girth algorithm needs d >= 2");
                (bo_classes(n, d), bo_palette_width(d))
            }
            OddGirthMode::Offline => {
                assert!(d >= 1, "radius must be positive");
                (offline_classes(n, d), a_palette_cap(n))
            }
        };
        HighOddGirth {
            d,
            n,
            mode,
            r,
            width,
            h_of: HashMap::new(),
            forests: vec![ParityForest::default(); r],
            classes: Vec::new(),
            class_of: HashMap::new(),
            colors: ColorMemo::default(),
        }
    }

    /// Number of H-classes.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Palette block width per H-class.
    pub fn block_width(&self) -> usize {
        self.width
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn h_color(&self, class: usize, local: Color) -> Color {
        match self.mode {
            OddGirthMode::Online => (class * self.width) as Color + local,
            // Interleaved so every class stays distinct without a fixed
            // per-class width; the finish step replaces these colors.
            OddGirthMode::Offline => (local - 1) * self.r as Color + class as Color + 1,
        }
    }

    fn w_color(&self, idx: usize) -> Color {
        (self.r * self.width + idx + 1) as Color
    }

    /// Step 1: the least class that accepts `v`, with A's local color.
    fn admit(&self, view: &View<'_>, v: Vertex) -> Option<(usize, Color)> {
        self.forests.iter().enumerate().find_map(|(i, forest)| {
            let c = forest.probe(view.neighbors(v)).ok()?;
            match self.mode {
                OddGirthMode::Online if c as usize > self.width => None,
                _ => Some((i, c)),
            }
        })
    }
}

impl OnlineColorer for HighOddGirth {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        if let Some((i, local)) = self.admit(view, v) {
            self.h_of.insert(v, i);
            self.forests[i].insert(v, local, view.neighbors(v));
            let color = self.h_color(i, local);
            self.colors.set(v, color);
            return Ok(Decision::new(color, Rule::Step1).with(Delta::HJoin {
                class: i + 1,
                vertex: v,
                local,
            }));
        }

        let odd_ball: Vec<Vertex> = view
            .ball(v, self.d)
            .into_iter()
            .filter(|&(_, dist)| dist % 2 == 1)
            .map(|(u, _)| u)
            .collect();
        let hit = odd_ball
            .iter()
            .filter_map(|u| self.class_of.get(u).map(|&c| (c, *u)))
            .min_by_key(|&(c, _)| c);
        if let Some((idx, witness)) = hit {
            let color = self.classes[idx].color;
            self.colors.set(v, color);
            return Ok(Decision::new(color, Rule::Step2).with(Delta::WJoin {
                class: idx + 1,
                witness,
            }));
        }

        let idx = self.classes.len();
        let color = self.w_color(idx);
        let mut members: Vec<Vertex> = odd_ball
            .into_iter()
            .filter(|u| self.h_of.contains_key(u))
            .collect();
        members.sort_unstable();
        for &u in &members {
            self.class_of.insert(u, idx);
        }
        self.classes.push(WitnessClass { color });
        self.colors.set(v, color);
        Ok(Decision::new(color, Rule::Step3).with(Delta::WCreate {
            class: idx + 1,
            color,
            members,
        }))
    }

    fn palette_cap(&self) -> Option<Color> {
        let classes = match self.mode {
            OddGirthMode::Online => bo_class_cap(self.n, self.d, self.r),
            OddGirthMode::Offline => self.n.div_ceil(self.r * self.d) + 1,
        };
        Some((self.r * self.width + classes) as Color)
    }
}
