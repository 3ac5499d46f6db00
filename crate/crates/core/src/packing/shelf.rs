use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ratio::{self, Q};

use super::{Placement, Rect};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShelfPacking {
    pub placements: Vec<Placement>,
    pub height: Q,
    /// Rectangle ids per shelf, bottom shelf first.
    pub shelves: Vec<Vec<String>>,
}

fn decreasing_height(a: &Rect, b: &Rect) -> Ordering {
    b.h.cmp(&a.h)
        .then_with(|| b.w.cmp(&a.w))
        .then_with(|| a.id.cmp(&b.id))
}

fn sorted<'a>(rects: &'a [Rect], width: &Q) -> Result<Vec<&'a Rect>> {
    if let Some(r) = rects.iter().find(|r| &r.w > width) {
        return Err(Error::precondition(format!(
            "rectangle `{}` is wider than the strip",
            r.id
        )));
    }
    let mut v: Vec<&Rect> = rects.iter().collect();
    v.sort_by(|a, b| decreasing_height(a, b));
    Ok(v)
}

struct Shelf {
    y: Q,
    h: Q,
    used: Q,
    ids: Vec<String>,
}

fn finish(shelves: Vec<Shelf>, placements: Vec<Placement>) -> ShelfPacking {
    let height = shelves
        .last()
        .map_or_else(ratio::zero, |s| &s.y + &s.h);
    ShelfPacking {
        placements,
        height,
        shelves: shelves.into_iter().map(|s| s.ids).collect(),
    }
}

/// Next-fit decreasing height.
pub fn nfdh(rects: &[Rect], width: &Q) -> Result<ShelfPacking> {
    let order = sorted(rects, width)?;
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut placements = Vec::with_capacity(rects.len());
    for r in order {
        let open = shelves.last().is_some_and(|s| &s.used + &r.w <= *width);
        if !open {
            let y = shelves
                .last()
                .map_or_else(ratio::zero, |s| &s.y + &s.h);
            shelves.push(Shelf {
                y,
                h: r.h.clone(),
                used: ratio::zero(),
                ids: Vec::new(),
            });
        }
        let s = shelves.last_mut().unwrap();
        placements.push(Placement {
            id: r.id.clone(),
            x: s.used.clone(),
            y: s.y.clone(),
        });
        s.used += &r.w;
        s.ids.push(r.id.clone());
    }
    Ok(finish(shelves, placements))
}

/// First-fit decreasing height.
pub fn ffdh(rects: &[Rect], width: &Q) -> Result<ShelfPacking> {
    let order = sorted(rects, width)?;
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut placements = Vec::with_capacity(rects.len());
    for r in order {
        let k = match shelves.iter().position(|s| &s.used + &r.w <= *width) {
            Some(k) => k,
            None => {
                let y = shelves
                    .last()
                    .map_or_else(ratio::zero, |s| &s.y + &s.h);
                shelves.push(Shelf {
                    y,
                    h: r.h.clone(),
                    used: ratio::zero(),
                    ids: Vec::new(),
                });
                shelves.len() - 1
            }
        };
        let s = &mut shelves[k];
        placements.push(Placement {
            id: r.id.clone(),
            x: s.used.clone(),
            y: s.y.clone(),
        });
        s.used += &r.w;
        s.ids.push(r.id.clone());
    }
    Ok(finish(shelves, placements))
}
