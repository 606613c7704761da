use super::{AlgError, ColorMemo};
use crate::engine::{Decision, OnlineColorer, Rule, View};
use crate::graph::{Color, Vertex};

/// Least positive color not in `used`.
pub fn first_fit_color<I: IntoIterator<Item = Color>>(used: I) -> Color {
    let mut used: Vec<Color> = used.into_iter().collect();
    used.sort_unstable();
    used.dedup();
    let mut c = 1;
    for u in used {
        if u == c {
            c += 1;
        } else if u > c {
            break;
        }
    }
    c
}

/// First Fit: each vertex takes the least color absent from its revealed
/// neighbors.
#[derive(Debug, Default)]
pub struct FirstFit {
    colors: ColorMemo,
}

impl FirstFit {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for FirstFit {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        let c = first_fit_color(view.neighbors(v).filter_map(|u| self.colors.get(u)));
        self.colors.set(v, c);
        Ok(Decision::new(c, Rule::Ff))
    }

    fn palette_cap(&self) -> Option<Color> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_missing_color() {
        assert_eq!(first_fit_color([]), 1);
        assert_eq!(first_fit_color([1, 2]), 3);
        assert_eq!(first_fit_color([2, 3]), 1);
        assert_eq!(first_fit_color([3, 1, 1, 4]), 2);
    }
}
