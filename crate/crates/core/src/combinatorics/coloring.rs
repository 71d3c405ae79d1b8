//! Colorings of a truncated translate cone in `N_0^3` and their
//! trivialization to a monochromatic 3-way window.
//!
//! Lines `L(a, b) = {z : z_3 = a, z_1 + z_2 = b}` are classified by the colors
//! of their inner points (`z_1 >= β_1 + 3`, `z_2 >= β_2 + 3`). Under the two
//! hypotheses (the neighbor rule `c(z+e_1) = 1 or c(z+e_2) = 2`, and no two
//! points with {1,2}-valued neighborhoods disagreeing in every coordinate)
//! far-out lines are all 1-lines or all 2-lines.

use serde::Serialize;
use thiserror::Error;

use super::kway::WindowSet;
use crate::grid::{box_indices, GridIndex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("colorings live on N_0^3, got dimension {0}")]
    Dimension(usize),
    #[error("β = {beta} lies outside the box of side {side}")]
    BetaOutsideBox { beta: GridIndex, side: u32 },
    #[error("color {color} at {z} is outside 1..=3")]
    BadColor { z: GridIndex, color: u8 },
    #[error("{z} or one of its upper neighbors lies outside the colored region")]
    OutOfBox { z: GridIndex },
    #[error("box side {side} is too small; at least {required} is needed")]
    BoxTooSmall { side: u32, required: u32 },
    #[error("inconclusive: {reason}")]
    Inconclusive { reason: String },
}

/// A 3-coloring of `tw(β) ∩ [0, side]^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridColoring {
    beta: GridIndex,
    side: u32,
    /// Dense over the whole box; 0 outside `tw(β)`.
    colors: Vec<u8>,
}

impl GridColoring {
    pub fn from_fn(beta: GridIndex, side: u32, mut color: impl FnMut(&GridIndex) -> u8) -> Result<Self, ColoringError> {
        if beta.dim() != 3 {
            return Err(ColoringError::Dimension(beta.dim()));
        }
        if beta.coords().iter().any(|&b| b > side) {
            return Err(ColoringError::BetaOutsideBox { beta, side });
        }
        let mut colors = Vec::with_capacity((side as usize + 1).pow(3));
        for z in box_indices(&GridIndex::zeros(3), side) {
            if beta.dominated_by(&z) {
                let c = color(&z);
                if !(1..=3).contains(&c) {
                    return Err(ColoringError::BadColor { z, color: c });
                }
                colors.push(c);
            } else {
                colors.push(0);
            }
        }
        Ok(Self { beta, side, colors })
    }

    pub fn constant(beta: GridIndex, side: u32, color: u8) -> Result<Self, ColoringError> {
        Self::from_fn(beta, side, |_| color)
    }

    pub fn beta(&self) -> &GridIndex {
        &self.beta
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    /// `None` outside `tw(β) ∩ box`.
    pub fn color(&self, z: &GridIndex) -> Option<u8> {
        if z.dim() != 3 || z.coords().iter().any(|&c| c > self.side) {
            return None;
        }
        let s = self.side as usize + 1;
        let flat = (z.get(0) as usize * s + z.get(1) as usize) * s + z.get(2) as usize;
        match self.colors[flat] {
            0 => None,
            c => Some(c),
        }
    }

    fn at(&self, x: u32, y: u32, a: u32) -> Option<u8> {
        self.color(&GridIndex::new(vec![x, y, a]))
    }
}

/// `(c(z+e_1), c(z+e_2), c(z+e_3))`.
pub fn signature(coloring: &GridColoring, z: &GridIndex) -> Result<[u8; 3], ColoringError> {
    let out = || ColoringError::OutOfBox { z: z.clone() };
    if coloring.color(z).is_none() {
        return Err(out());
    }
    let mut sig = [0u8; 3];
    for (i, s) in sig.iter_mut().enumerate() {
        *s = coloring.color(&z.step(i)).ok_or_else(out)?;
    }
    Ok(sig)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineClass {
    One,
    Two,
    Mixed,
}

/// A concrete failure of one of the two hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum HypothesisViolation {
    /// `c(z+e_1) != 1` and `c(z+e_2) != 2`.
    NeighborRule { z: GridIndex, colors: [u8; 2] },
    /// Two points whose neighborhoods use only colors 1 and 2 but agree in
    /// no coordinate.
    SignatureClash {
        first: GridIndex,
        first_signature: [u8; 3],
        second: GridIndex,
        second_signature: [u8; 3],
        /// `(a, b)` of the first of two adjacent 1,2-lines, when the pair
        /// came from that construction.
        mixed_lines: Option<(u32, u32)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Trivialization {
    /// A monochromatic, upward-closed window inside `tw(β + (1,1,1))`.
    Window { window: WindowSet, color: u8 },
    Violation(HypothesisViolation),
}

/// Smallest box side the line analysis can run on.
pub fn required_side(beta: &GridIndex) -> u32 {
    (beta.get(0).max(beta.get(1)) + 21).max(beta.get(2) + 3)
}

/// Class of `L(a, b)` from its inner points; `None` if it has none in the box.
pub fn classify_line(coloring: &GridColoring, a: u32, b: u32) -> Option<LineClass> {
    let (b1, b2) = (coloring.beta.get(0), coloring.beta.get(1));
    let side = coloring.side;
    let lo = (b1 + 3).max(b.saturating_sub(side));
    let hi = side.min(b.checked_sub(b2 + 3)?);
    let (mut ones, mut twos, mut total) = (0, 0, 0);
    for x in lo..=hi {
        match coloring.at(x, b - x, a)? {
            1 => ones += 1,
            2 => twos += 1,
            _ => {}
        }
        total += 1;
    }
    match total {
        0 => None,
        _ if ones == total => Some(LineClass::One),
        _ if twos == total => Some(LineClass::Two),
        _ => Some(LineClass::Mixed),
    }
}

/// Finds a monochromatic 3-way window (color 1 or 2), or a witness that a
/// hypothesis fails.
pub fn trivialize_coloring(coloring: &GridColoring) -> Result<Trivialization, ColoringError> {
    let beta = &coloring.beta;
    let side = coloring.side;
    let required = required_side(beta);
    if side < required {
        return Err(ColoringError::BoxTooSmall { side, required });
    }
    let (b1, b2, b3) = (beta.get(0), beta.get(1), beta.get(2));
    let domain: Vec<GridIndex> = box_indices(&GridIndex::zeros(3), side)
        .filter(|z| beta.dominated_by(z))
        .collect();

    // neighbor rule
    for z in &domain {
        if z.get(0) < side && z.get(1) < side {
            let c1 = coloring.color(&z.step(0)).expect("inside domain");
            let c2 = coloring.color(&z.step(1)).expect("inside domain");
            if c1 != 1 && c2 != 2 {
                return Ok(Trivialization::Violation(HypothesisViolation::NeighborRule {
                    z: z.clone(),
                    colors: [c1, c2],
                }));
            }
        }
    }

    // adjacent 1,2-lines force two points with opposite constant signatures
    for a in b3..side {
        for b in (b1 + b2 + 11)..=(side + b1.min(b2)) {
            if classify_line(coloring, a, b) != Some(LineClass::Mixed)
                || classify_line(coloring, a + 1, b - 1) != Some(LineClass::Mixed)
            {
                continue;
            }
            let low = GridIndex::new(vec![b - b2 - 1, b2, a]);
            let high = GridIndex::new(vec![b1, b - b1 - 1, a]);
            if let (Ok(s1), Ok(s2)) = (signature(coloring, &low), signature(coloring, &high)) {
                if s1 == [1, 1, 1] && s2 == [2, 2, 2] {
                    return Ok(Trivialization::Violation(HypothesisViolation::SignatureClash {
                        first: low,
                        first_signature: s1,
                        second: high,
                        second_signature: s2,
                        mixed_lines: Some((a, b)),
                    }));
                }
            }
        }
    }

    // any complementary pair of {1,2}-signatures
    let mut first_with: [Option<GridIndex>; 8] = Default::default();
    for z in &domain {
        let Ok(sig) = signature(coloring, z) else { continue };
        if sig.iter().all(|&c| c == 1 || c == 2) {
            let key = sig.iter().fold(0, |acc, &c| acc * 2 + (c as usize - 1));
            first_with[key].get_or_insert_with(|| z.clone());
        }
    }
    for key in 0..4 {
        if let (Some(z), Some(t)) = (&first_with[key], &first_with[7 - key]) {
            return Ok(Trivialization::Violation(HypothesisViolation::SignatureClash {
                first_signature: signature(coloring, z)?,
                second_signature: signature(coloring, t)?,
                first: z.clone(),
                second: t.clone(),
                mixed_lines: None,
            }));
        }
    }

    // far-out lines decide the color
    let mut seen = None;
    for a in (b3 + 2)..side {
        for b in (b1 + b2 + 21)..=(side + b1.min(b2)) {
            match (classify_line(coloring, a, b), seen) {
                (None, _) => {}
                (Some(LineClass::Mixed), _) => {
                    return Err(ColoringError::Inconclusive {
                        reason: format!("line L({a}, {b}) carries both colors inside the box"),
                    })
                }
                (Some(c), None) => seen = Some(c),
                (Some(c), Some(prev)) if c != prev => {
                    return Err(ColoringError::Inconclusive {
                        reason: "both 1-lines and 2-lines occur far out in the box".into(),
                    })
                }
                _ => {}
            }
        }
    }
    let color = match seen {
        Some(LineClass::One) => 1,
        Some(LineClass::Two) => 2,
        _ => {
            return Err(ColoringError::Inconclusive {
                reason: "no classifiable line in the box".into(),
            })
        }
    };

    // largest upward-closed set of that color inside tw(β + (1,1,1))
    let inner = GridIndex::new(vec![b1 + 1, b2 + 1, b3 + 1]);
    let s = side as usize + 1;
    let mut good = vec![false; s * s * s];
    let all: Vec<GridIndex> = box_indices(&GridIndex::zeros(3), side).collect();
    for (flat, z) in all.iter().enumerate().rev() {
        if !inner.dominated_by(z) || coloring.color(z) != Some(color) {
            continue;
        }
        let strides = [s * s, s, 1];
        good[flat] = (0..3).all(|i| z.get(i) == side || good[flat + strides[i]]);
    }
    let window = WindowSet::from_predicate(GridIndex::zeros(3), side, |z| {
        let flat = (z.get(0) as usize * s + z.get(1) as usize) * s + z.get(2) as usize;
        good[flat]
    });
    if !window.members().any(|z| !window.on_upper_boundary(&z)) {
        return Err(ColoringError::Inconclusive {
            reason: format!("no interior point of color {color} has a monochromatic upper cone"),
        });
    }
    debug_assert!(window.members().all(|z| coloring.color(&z) == Some(color)));
    Ok(Trivialization::Window { window, color })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::kway::verify_kway;

    #[test]
    fn signature_examples() {
        let one = GridColoring::constant(GridIndex::zeros(3), 4, 1).unwrap();
        assert_eq!(signature(&one, &GridIndex::from([1, 2, 3])).unwrap(), [1, 1, 1]);
        let parity = GridColoring::from_fn(GridIndex::zeros(3), 4, |z| if z.get(2) % 2 == 0 { 1 } else { 2 }).unwrap();
        assert_eq!(signature(&parity, &GridIndex::zeros(3)).unwrap(), [1, 1, 2]);
        assert!(matches!(
            signature(&one, &GridIndex::from([4, 0, 0])),
            Err(ColoringError::OutOfBox { .. })
        ));
    }

    #[test]
    fn constant_colorings_trivialize() {
        let beta = GridIndex::from([1, 2, 0]);
        for c in [1, 2] {
            let col = GridColoring::constant(beta.clone(), 24, c).unwrap();
            match trivialize_coloring(&col).unwrap() {
                Trivialization::Window { window, color } => {
                    assert_eq!(color, c);
                    assert_eq!(window, WindowSet::translate_cone(&GridIndex::from([2, 3, 1]), 24));
                    assert!(verify_kway(&window, 3).holds());
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn small_box_is_rejected() {
        let col = GridColoring::constant(GridIndex::from([2, 1, 0]), 22, 1).unwrap();
        assert_eq!(
            trivialize_coloring(&col),
            Err(ColoringError::BoxTooSmall { side: 22, required: 23 })
        );
    }

    #[test]
    fn neighbor_rule_violation() {
        let col = GridColoring::constant(GridIndex::zeros(3), 21, 3).unwrap();
        assert_eq!(
            trivialize_coloring(&col).unwrap(),
            Trivialization::Violation(HypothesisViolation::NeighborRule {
                z: GridIndex::zeros(3),
                colors: [3, 3]
            })
        );
    }

    #[test]
    fn diagonal_split_gives_adjacent_mixed_lines() {
        let col = GridColoring::from_fn(GridIndex::zeros(3), 25, |z| if z.get(0) >= z.get(1) { 1 } else { 2 }).unwrap();
        match trivialize_coloring(&col).unwrap() {
            Trivialization::Violation(HypothesisViolation::SignatureClash {
                first,
                second,
                mixed_lines,
                ..
            }) => {
                assert_eq!(mixed_lines, Some((0, 11)));
                assert_eq!(first, GridIndex::from([10, 0, 0]));
                assert_eq!(second, GridIndex::from([0, 10, 0]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn line_classes() {
        let col = GridColoring::from_fn(GridIndex::zeros(3), 25, |z| if z.get(0) >= z.get(1) { 1 } else { 2 }).unwrap();
        assert_eq!(classify_line(&col, 0, 12), Some(LineClass::Mixed));
        assert_eq!(classify_line(&col, 0, 2), None);
        let one = GridColoring::constant(GridIndex::zeros(3), 25, 1).unwrap();
        assert_eq!(classify_line(&one, 3, 30), Some(LineClass::One));
    }
}
