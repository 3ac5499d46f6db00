//! Rectangle packing: Steinberg's sufficient condition and packer, shelf
//! heuristics, and a verifier for placements.

mod shelf;
mod steinberg;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::ratio::{self, Q};

pub use shelf::{ffdh, nfdh, ShelfPacking};
pub use steinberg::{min_width_for, steinberg_pack, steinberg_pack_stats, PackStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub id: String,
    pub w: Q,
    pub h: Q,
}

impl Rect {
    pub fn new(id: impl Into<String>, w: Q, h: Q) -> Self {
        Rect { id: id.into(), w, h }
    }

    pub fn ints(id: impl Into<String>, w: u64, h: u64) -> Self {
        Rect::new(id, ratio::int(w), ratio::int(h))
    }

    pub fn area(&self) -> Q {
        &self.w * &self.h
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub id: String,
    #[serde(with = "ratio::serde_q")]
    pub x: Q,
    #[serde(with = "ratio::serde_q")]
    pub y: Q,
}

/// Axis-parallel container with width `w` and height `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub w: Q,
    pub h: Q,
}

impl Bin {
    pub fn new(w: Q, h: Q) -> Self {
        Bin { w, h }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PackViolation {
    Overlap { a: String, b: String },
    OutOfBox { id: String },
    Missing { id: String },
    Duplicate { id: String },
    Unknown { id: String },
}

impl fmt::Display for PackViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackViolation::Overlap { a, b } => write!(f, "`{a}` overlaps `{b}`"),
            PackViolation::OutOfBox { id } => write!(f, "`{id}` leaves the box"),
            PackViolation::Missing { id } => write!(f, "`{id}` is not placed"),
            PackViolation::Duplicate { id } => write!(f, "`{id}` is placed twice"),
            PackViolation::Unknown { id } => write!(f, "`{id}` is not a known rectangle"),
        }
    }
}

pub fn total_area(rects: &[Rect]) -> Q {
    rects.iter().map(Rect::area).sum()
}

fn max_of<'a>(xs: impl Iterator<Item = &'a Q>) -> Q {
    xs.fold(ratio::zero(), |m, x| ratio::max(&m, x))
}

/// Steinberg's condition for packing `rects` into `bin`:
/// `h_max <= H`, `w_max <= W` and
/// `2 * area <= W*H - (2 h_max - H)_+ (2 w_max - W)_+`.
pub fn steinberg_condition(rects: &[Rect], bin: &Bin) -> bool {
    let hmax = max_of(rects.iter().map(|r| &r.h));
    let wmax = max_of(rects.iter().map(|r| &r.w));
    condition_parts(&total_area(rects), &wmax, &hmax, &bin.w, &bin.h)
}

pub(crate) fn condition_parts(area: &Q, wmax: &Q, hmax: &Q, w: &Q, h: &Q) -> bool {
    if hmax > h || wmax > w {
        return false;
    }
    let two = ratio::int(2);
    let slack = ratio::pos(&two * hmax - h) * ratio::pos(&two * wmax - w);
    &two * area <= w * h - slack
}

pub fn verify_packing(placements: &[Placement], rects: &[Rect], bin: &Bin) -> Vec<PackViolation> {
    let mut out = Vec::new();
    let index: HashMap<&str, usize> = rects
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    let mut seen = vec![false; rects.len()];
    let mut boxes: Vec<(usize, &Q, &Q)> = Vec::new();
    for p in placements {
        let Some(&i) = index.get(p.id.as_str()) else {
            out.push(PackViolation::Unknown { id: p.id.clone() });
            continue;
        };
        if seen[i] {
            out.push(PackViolation::Duplicate { id: p.id.clone() });
            continue;
        }
        seen[i] = true;
        let r = &rects[i];
        if p.x < ratio::zero() || p.y < ratio::zero() || &p.x + &r.w > bin.w || &p.y + &r.h > bin.h {
            out.push(PackViolation::OutOfBox { id: p.id.clone() });
        }
        for &(k, x, y) in &boxes {
            let o = &rects[k];
            if p.x < x + &o.w && *x < &p.x + &r.w && p.y < y + &o.h && *y < &p.y + &r.h {
                out.push(PackViolation::Overlap {
                    a: o.id.clone(),
                    b: p.id.clone(),
                });
            }
        }
        boxes.push((i, &p.x, &p.y));
    }
    for (i, r) in rects.iter().enumerate() {
        if !seen[i] {
            out.push(PackViolation::Missing { id: r.id.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        let b5 = Bin::new(ratio::int(5), ratio::int(5));
        assert!(!steinberg_condition(&[Rect::ints("a", 4, 4)], &b5));
        let three: Vec<Rect> = (0..3).map(|k| Rect::ints(format!("s{k}"), 3, 3)).collect();
        assert!(steinberg_condition(&three, &Bin::new(ratio::int(10), ratio::int(6))));
        assert!(!steinberg_condition(&[Rect::ints("a", 6, 1)], &b5));
        assert!(steinberg_condition(&[], &b5));
    }

    #[test]
    fn verifier_catches_problems() {
        let rects = vec![Rect::ints("a", 2, 2), Rect::ints("b", 2, 2)];
        let bin = Bin::new(ratio::int(4), ratio::int(2));
        let at = |id: &str, x: u64| Placement {
            id: id.into(),
            x: ratio::int(x),
            y: ratio::zero(),
        };
        assert!(verify_packing(&[at("a", 0), at("b", 2)], &rects, &bin).is_empty());
        assert_eq!(
            verify_packing(&[at("a", 0), at("b", 0)], &rects, &bin),
            vec![PackViolation::Overlap {
                a: "a".into(),
                b: "b".into()
            }]
        );
        assert_eq!(
            verify_packing(&[at("a", 0), at("b", 3)], &rects, &bin),
            vec![PackViolation::OutOfBox { id: "b".into() }]
        );
        let v = verify_packing(&[at("a", 0), at("a", 2), at("z", 0)], &rects, &bin);
        assert_eq!(v.len(), 3);
    }
}
