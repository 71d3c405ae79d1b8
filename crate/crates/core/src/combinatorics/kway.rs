//! Finite windows onto subsets of `N_0^n` and the k-way property.

use serde::Serialize;

use crate::grid::{box_indices, GridIndex};

/// A subset of `anchor + [0, side]^n`, stored as a dense membership table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowSet {
    pub anchor: GridIndex,
    pub side: u32,
    members: Vec<bool>,
}

impl WindowSet {
    /// Membership decided by `pred` on the global coordinates of each box point.
    pub fn from_predicate(anchor: GridIndex, side: u32, mut pred: impl FnMut(&GridIndex) -> bool) -> Self {
        let members = box_indices(&anchor, side).map(|x| pred(&x)).collect();
        Self { anchor, side, members }
    }

    /// `t + N_0^n` truncated to `[0, side]^n`.
    pub fn translate_cone(t: &GridIndex, side: u32) -> Self {
        Self::from_predicate(GridIndex::zeros(t.dim()), side, |x| t.dominated_by(x))
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    fn offset(&self, x: &GridIndex) -> Option<usize> {
        if x.dim() != self.dim() {
            return None;
        }
        let per_axis = self.side as usize + 1;
        let mut flat = 0usize;
        for i in 0..self.dim() {
            let local = x.get(i).checked_sub(self.anchor.get(i))?;
            if local > self.side {
                return None;
            }
            flat = flat * per_axis + local as usize;
        }
        Some(flat)
    }

    /// Whether `x` lies in the box.
    pub fn in_box(&self, x: &GridIndex) -> bool {
        self.offset(x).is_some()
    }

    /// False outside the box.
    pub fn contains(&self, x: &GridIndex) -> bool {
        self.offset(x).is_some_and(|k| self.members[k])
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> impl Iterator<Item = GridIndex> + '_ {
        box_indices(&self.anchor, self.side)
            .zip(&self.members)
            .filter_map(|(x, &m)| m.then_some(x))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    /// Whether some neighbor `x + e_i` leaves the box.
    pub fn on_upper_boundary(&self, x: &GridIndex) -> bool {
        (0..self.dim()).any(|i| x.get(i) - self.anchor.get(i) == self.side)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KwayViolation {
    pub point: GridIndex,
    /// `|N(s) ∩ S|`.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KwayReport {
    pub k: usize,
    pub checked: usize,
    pub violations: Vec<KwayViolation>,
    /// Members whose neighborhood leaves the box, so the count is unknown.
    pub indeterminate: Vec<GridIndex>,
}

impl KwayReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists members `s` with `|N(s) ∩ S| != k`, where `N(s) = {s + e_i}`.
pub fn verify_kway(set: &WindowSet, k: usize) -> KwayReport {
    let mut report = KwayReport {
        k,
        checked: 0,
        violations: Vec::new(),
        indeterminate: Vec::new(),
    };
    for s in set.members() {
        if set.on_upper_boundary(&s) {
            report.indeterminate.push(s);
            continue;
        }
        report.checked += 1;
        let count = (0..set.dim()).filter(|&i| set.contains(&s.step(i))).count();
        if count != k {
            report.violations.push(KwayViolation { point: s, count });
        }
    }
    report
}

/// `{t + a e_i1 + b e_i2}`; directions 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuarterPlane {
    pub i1: usize,
    pub i2: usize,
    pub corner: GridIndex,
}

/// Recognizes a box truncation of a quarter-plane in `N_0^3`.
///
/// Both spanning directions must have room to grow inside the box, so a
/// line is never mistaken for a degenerate plane.
pub fn detect_quarter_plane(set: &WindowSet) -> Option<QuarterPlane> {
    if set.dim() != 3 || set.is_empty() {
        return None;
    }
    let members: Vec<GridIndex> = set.members().collect();
    let corner = GridIndex::new(
        (0..3)
            .map(|i| members.iter().map(|m| m.get(i)).min().expect("non-empty"))
            .collect(),
    );
    if !set.contains(&corner) {
        return None;
    }
    let top = |i: usize| set.anchor.get(i) + set.side;
    for i1 in 0..3 {
        for i2 in (i1 + 1)..3 {
            if corner.get(i1) >= top(i1) || corner.get(i2) >= top(i2) {
                continue;
            }
            let fixed = 3 - i1 - i2;
            let plane = |x: &GridIndex| {
                x.get(fixed) == corner.get(fixed) && x.get(i1) >= corner.get(i1) && x.get(i2) >= corner.get(i2)
            };
            if box_indices(&set.anchor, set.side).all(|x| plane(&x) == set.contains(&x)) {
                return Some(QuarterPlane { i1, i2, corner });
            }
        }
    }
    None
}
