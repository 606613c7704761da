use std::collections::HashMap;

use super::{bnd_class_cap, bnd_palette, first_fit_color, AlgError, ColorMemo};
use crate::engine::{Decision, Delta, OnlineColorer, Rule, View};
use crate::graph::{Color, Vertex};

#[derive(Debug, Clone)]
struct WitnessClass {
    color: Color,
    founder: Vertex,
}

/// Online coloring for graphs of girth at least `4d + 1`.
///
/// Step 1 is First Fit restricted to the palette `1..=K1` with
/// `K1 = ceil(d n^(1/(d+1)))`. A vertex that sees every one of those colors
/// on its neighbors either reuses the color of the first witness class
/// within view-distance `d` of it, or opens a new class whose witnesses are
/// all revealed vertices within distance `d`.
#[derive(Debug)]
pub struct HighGirth {
    d: usize,
    n: usize,
    k1: usize,
    classes: Vec<WitnessClass>,
    class_of: HashMap<Vertex, usize>,
    colors: ColorMemo,
}

impl HighGirth {
    pub fn new(n: usize, d: usize) -> Self {
        assert!(d >= 1, "radius must be positive");
        HighGirth {
            d,
            n,
            k1: bnd_palette(n, d),
            classes: Vec::new(),
            class_of: HashMap::new(),
            colors: ColorMemo::default(),
        }
    }

    /// Step-1 palette size.
    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Founder of each class, in class order.
    pub fn founders(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.classes.iter().map(|c| c.founder)
    }

    fn class_color(&self, idx: usize) -> Color {
        (self.k1 + idx + 1) as Color
    }
}

impl OnlineColorer for HighGirth {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        let ff = first_fit_color(view.neighbors(v).filter_map(|u| self.colors.get(u)));
        if ff as usize <= self.k1 {
            self.colors.set(v, ff);
            return Ok(Decision::new(ff, Rule::Step1));
        }

        let ball = view.ball(v, self.d);
        // Least class with a witness within distance d; v is new, so it is
        // never a witness itself.
        let hit = ball
            .iter()
            .filter_map(|&(u, _)| self.class_of.get(&u).map(|&c| (c, u)))
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
        let color = self.class_color(idx);
        let mut members: Vec<Vertex> = ball.into_iter().map(|(u, _)| u).collect();
        members.sort_unstable();
        for &u in &members {
            self.class_of.insert(u, idx);
        }
        self.classes.push(WitnessClass {
            color,
            founder: v,
        });
        self.colors.set(v, color);
        Ok(Decision::new(color, Rule::Step3).with(Delta::WCreate {
            class: idx + 1,
            color,
            members,
        }))
    }

    fn palette_cap(&self) -> Option<Color> {
        Some((self.k1 + bnd_class_cap(self.n, self.d)) as Color)
    }
}
