//! Packer for rectangle sets that satisfy Steinberg's condition.
//!
//! The main path is a recursive decomposition in the spirit of Steinberg's
//! procedures: stack the wide items, peel off a row, split the box into two
//! boxes that each satisfy the condition again, or put one item in a corner
//! and split the remaining L-shaped region. Every sub-problem is only
//! entered after its condition has been checked, so whatever the recursion
//! returns is a valid packing. If the recursion gets stuck it falls back to
//! a bottom-left heuristic and then to a complete search over normal
//! patterns. The result is always checked with [`verify_packing`].

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ratio::{self, Q};

use super::{condition_parts, steinberg_condition, verify_packing, Bin, Placement, Rect};

#[derive(Debug, Clone)]
struct Item {
    k: usize,
    w: Q,
    h: Q,
}

type Out = Vec<(usize, Q, Q)>;

/// Which stage produced the packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackStats {
    Recursive,
    BottomLeft,
    Search,
}

struct Ctx {
    budget: u64,
}

fn wmax(items: &[Item]) -> Q {
    items.iter().fold(ratio::zero(), |m, i| ratio::max(&m, &i.w))
}

fn hmax(items: &[Item]) -> Q {
    items.iter().fold(ratio::zero(), |m, i| ratio::max(&m, &i.h))
}

fn area(items: &[Item]) -> Q {
    items.iter().map(|i| &i.w * &i.h).sum()
}

fn cond(items: &[Item], w: &Q, h: &Q) -> bool {
    items.is_empty() || condition_parts(&area(items), &wmax(items), &hmax(items), w, h)
}

/// Smallest box width for which the condition holds at height `h`.
fn min_width(items: &[Item], h: &Q) -> Option<Q> {
    if items.is_empty() {
        return Some(ratio::zero());
    }
    let (a, b, s) = (hmax(items), wmax(items), area(items));
    if a > *h {
        return None;
    }
    let two = ratio::int(2);
    let k = ratio::pos(&two * &a - h);
    let u = if &two * &s >= &two * &b * h {
        &two * &s / h
    } else {
        (&two * &s + &two * &b * &k) / (h + &k)
    };
    Some(ratio::max(&u, &b))
}

/// Smallest width `W` such that `rects` satisfy the condition in a
/// `W x height` box, or `None` when some rectangle is taller than `height`.
pub fn min_width_for(rects: &[Rect], height: &Q) -> Option<Q> {
    let items: Vec<Item> = rects
        .iter()
        .enumerate()
        .map(|(k, r)| Item {
            k,
            w: r.w.clone(),
            h: r.h.clone(),
        })
        .collect();
    min_width(&items, height)
}

fn transpose(items: &[Item]) -> Vec<Item> {
    items
        .iter()
        .map(|i| Item {
            k: i.k,
            w: i.h.clone(),
            h: i.w.clone(),
        })
        .collect()
}

fn shift(out: Out, dx: &Q, dy: &Q) -> Out {
    out.into_iter().map(|(k, x, y)| (k, x + dx, y + dy)).collect()
}

fn pack(items: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    if ctx.budget == 0 {
        return None;
    }
    ctx.budget -= 1;
    match items.len() {
        0 => return Some(Vec::new()),
        1 => return Some(vec![(items[0].k, ratio::zero(), ratio::zero())]),
        _ => {}
    }
    let t = transpose(items);
    type Proc = fn(&[Item], &Q, &Q, &mut Ctx) -> Option<Out>;
    let procs: [Proc; 5] = [row, stack_wide, split, shelf, corner];
    for p in procs {
        if let Some(o) = p(items, w, h, ctx) {
            return Some(o);
        }
        if let Some(o) = p(&t, h, w, ctx) {
            return Some(o.into_iter().map(|(k, x, y)| (k, y, x)).collect());
        }
    }
    None
}

fn row(items: &[Item], w: &Q, _h: &Q, _ctx: &mut Ctx) -> Option<Out> {
    let total: Q = items.iter().map(|i| i.w.clone()).sum();
    if total > *w {
        return None;
    }
    let mut x = ratio::zero();
    let mut out = Vec::with_capacity(items.len());
    for i in items {
        out.push((i.k, x.clone(), ratio::zero()));
        x += &i.w;
    }
    Some(out)
}

/// Stack items wider than half the box at the bottom and pack the rest
/// above them.
fn stack_wide(items: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    let two = ratio::int(2);
    let mut wide: Vec<&Item> = items.iter().filter(|i| &two * &i.w > *w).collect();
    if wide.is_empty() {
        return None;
    }
    wide.sort_by(|a, b| b.w.cmp(&a.w).then(b.h.cmp(&a.h)).then(a.k.cmp(&b.k)));
    for cnt in (1..=wide.len()).rev() {
        let chosen: BTreeSet<usize> = wide[..cnt].iter().map(|i| i.k).collect();
        let hs: Q = wide[..cnt].iter().map(|i| i.h.clone()).sum();
        if hs > *h {
            continue;
        }
        let rest: Vec<Item> = items
            .iter()
            .filter(|i| !chosen.contains(&i.k))
            .cloned()
            .collect();
        let top = h - &hs;
        if !cond(&rest, w, &top) {
            continue;
        }
        if let Some(o) = pack(&rest, w, &top, ctx) {
            let mut out = Vec::with_capacity(items.len());
            let mut y = ratio::zero();
            for i in &wide[..cnt] {
                out.push((i.k, ratio::zero(), y.clone()));
                y += &i.h;
            }
            out.extend(shift(o, &ratio::zero(), &hs));
            return Some(out);
        }
    }
    None
}

/// Cut the box vertically into two boxes that both satisfy the condition.
fn split(items: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    let n = items.len();
    let mut orders: Vec<Vec<Item>> = Vec::new();
    let mut by_w = items.to_vec();
    by_w.sort_by(|a, b| b.w.cmp(&a.w).then(b.h.cmp(&a.h)).then(a.k.cmp(&b.k)));
    let mut by_h = items.to_vec();
    by_h.sort_by(|a, b| b.h.cmp(&a.h).then(b.w.cmp(&a.w)).then(a.k.cmp(&b.k)));
    let mut by_a = items.to_vec();
    by_a.sort_by(|a, b| (&b.w * &b.h).cmp(&(&a.w * &a.h)).then(a.k.cmp(&b.k)));
    orders.push(by_w);
    orders.push(by_h);
    // alternate assignment by area keeps the halves balanced
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut la, mut ra) = (ratio::zero(), ratio::zero());
    for i in &by_a {
        if la <= ra {
            la += &i.w * &i.h;
            left.push(i.clone());
        } else {
            ra += &i.w * &i.h;
            right.push(i.clone());
        }
    }
    let balanced_cut = left.len();
    left.extend(right);
    orders.push(by_a);
    for (oi, order) in orders.iter().enumerate() {
        let cuts: Vec<usize> = (1..n).collect();
        for m in cuts {
            if let Some(o) = try_cut(&order[..m], &order[m..], w, h, ctx) {
                return Some(o);
            }
        }
        if oi == 0 && balanced_cut > 0 && balanced_cut < n {
            if let Some(o) = try_cut(&left[..balanced_cut], &left[balanced_cut..], w, h, ctx) {
                return Some(o);
            }
        }
    }
    None
}

fn try_cut(l1: &[Item], l2: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    let u1 = min_width(l1, h)?;
    let u2 = min_width(l2, h)?;
    if &u1 + &u2 > *w {
        return None;
    }
    // give the slack to whichever side is more crowded
    for first in [u1.clone(), w - &u2] {
        let second = w - &first;
        let a = pack(l1, &first, h, ctx)?;
        if let Some(b) = pack(l2, &second, h, ctx) {
            let mut out = a;
            out.extend(shift(b, &first, &ratio::zero()));
            return Some(out);
        }
        if first == w - &u2 {
            break;
        }
    }
    None
}

/// Put a first-fit row of the tallest items at the bottom.
fn shelf(items: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    let mut order = items.to_vec();
    order.sort_by(|a, b| b.h.cmp(&a.h).then(b.w.cmp(&a.w)).then(a.k.cmp(&b.k)));
    let mut used = ratio::zero();
    let mut in_row = Vec::new();
    let mut rest = Vec::new();
    for i in order {
        if &used + &i.w <= *w {
            used += &i.w;
            in_row.push(i);
        } else {
            rest.push(i);
        }
    }
    if rest.is_empty() {
        return None;
    }
    let rh = in_row[0].h.clone();
    let top = h - &rh;
    if !cond(&rest, w, &top) {
        return None;
    }
    let o = pack(&rest, w, &top, ctx)?;
    let mut out = Vec::with_capacity(items.len());
    let mut x = ratio::zero();
    for i in &in_row {
        out.push((i.k, x.clone(), ratio::zero()));
        x += &i.w;
    }
    out.extend(shift(o, &ratio::zero(), &rh));
    Some(out)
}

/// One item in the lower-left corner, the rest split between the region to
/// its right and the region above it.
fn corner(items: &[Item], w: &Q, h: &Q, ctx: &mut Ctx) -> Option<Out> {
    let mut cands = items.to_vec();
    cands.sort_by(|a, b| (&b.w * &b.h).cmp(&(&a.w * &a.h)).then(a.k.cmp(&b.k)));
    let picks: Vec<Item> = cands.iter().take(3).cloned().collect();
    for r in &picks {
        let others: Vec<Item> = cands.iter().filter(|i| i.k != r.k).cloned().collect();
        // (right box, top box, top box origin x)
        let layouts = [
            ((w - &r.w, h.clone()), (r.w.clone(), h - &r.h)),
            ((w - &r.w, r.h.clone()), (w.clone(), h - &r.h)),
        ];
        for ((rw, rh), (tw, th)) in layouts {
            for prefer_top in [false, true] {
                let mut a: Vec<Item> = Vec::new();
                let mut b: Vec<Item> = Vec::new();
                let mut ok = true;
                for i in &others {
                    let fits_a = i.w <= rw && i.h <= rh && {
                        a.push(i.clone());
                        let c = cond(&a, &rw, &rh);
                        a.pop();
                        c
                    };
                    let fits_b = i.w <= tw && i.h <= th && {
                        b.push(i.clone());
                        let c = cond(&b, &tw, &th);
                        b.pop();
                        c
                    };
                    match (fits_a, fits_b, prefer_top) {
                        (_, true, true) | (false, true, false) => b.push(i.clone()),
                        (true, _, _) => a.push(i.clone()),
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let Some(pa) = pack(&a, &rw, &rh, ctx) else {
                    continue;
                };
                let Some(pb) = pack(&b, &tw, &th, ctx) else {
                    continue;
                };
                let mut out = vec![(r.k, ratio::zero(), ratio::zero())];
                out.extend(shift(pa, &r.w, &ratio::zero()));
                out.extend(shift(pb, &ratio::zero(), &r.h));
                return Some(out);
            }
        }
    }
    None
}

fn overlaps(a: (&Q, &Q, &Q, &Q), b: (&Q, &Q, &Q, &Q)) -> bool {
    a.0 < &(b.0 + b.2) && b.0 < &(a.0 + a.2) && a.1 < &(b.1 + b.3) && b.1 < &(a.1 + a.3)
}

/// Bottom-left placement in the given order.
fn bottom_left(items: &[Item], w: &Q, h: &Q) -> Option<Out> {
    let mut placed: Vec<(Item, Q, Q)> = Vec::new();
    for it in items {
        let mut xs: BTreeSet<Q> = BTreeSet::new();
        let mut ys: BTreeSet<Q> = BTreeSet::new();
        xs.insert(ratio::zero());
        ys.insert(ratio::zero());
        for (p, x, y) in &placed {
            xs.insert(x + &p.w);
            ys.insert(y + &p.h);
        }
        let mut best: Option<(Q, Q)> = None;
        'outer: for y in &ys {
            if &(y + &it.h) > h {
                break;
            }
            for x in &xs {
                if &(x + &it.w) > w {
                    break;
                }
                let free = placed
                    .iter()
                    .all(|(p, px, py)| !overlaps((x, y, &it.w, &it.h), (px, py, &p.w, &p.h)));
                if free {
                    best = Some((x.clone(), y.clone()));
                    break 'outer;
                }
            }
        }
        let (x, y) = best?;
        placed.push((it.clone(), x, y));
    }
    Some(placed.into_iter().map(|(i, x, y)| (i.k, x, y)).collect())
}

fn subset_sums(vals: &[Q], limit: &Q) -> Vec<Q> {
    let mut s: BTreeSet<Q> = BTreeSet::new();
    s.insert(ratio::zero());
    for v in vals {
        let add: Vec<Q> = s.iter().map(|x| x + v).filter(|x| x <= limit).collect();
        s.extend(add);
        if s.len() > 4096 {
            break;
        }
    }
    s.into_iter().collect()
}

/// Depth-first search over normal patterns: every coordinate is a subset
/// sum of the other items' sizes, which loses no packing.
fn normal_search(items: &[Item], w: &Q, h: &Q, budget: &mut u64) -> Option<Out> {
    let xs: Vec<Vec<Q>> = items
        .iter()
        .enumerate()
        .map(|(k, it)| {
            let others: Vec<Q> = items
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| o.w.clone())
                .collect();
            subset_sums(&others, &(w - &it.w))
        })
        .collect();
    let ys: Vec<Vec<Q>> = items
        .iter()
        .enumerate()
        .map(|(k, it)| {
            let others: Vec<Q> = items
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| o.h.clone())
                .collect();
            subset_sums(&others, &(h - &it.h))
        })
        .collect();
    let mut pos: Vec<(Q, Q)> = Vec::with_capacity(items.len());
    fn go(
        d: usize,
        items: &[Item],
        xs: &[Vec<Q>],
        ys: &[Vec<Q>],
        pos: &mut Vec<(Q, Q)>,
        budget: &mut u64,
    ) -> bool {
        if d == items.len() {
            return true;
        }
        let it = &items[d];
        for y in &ys[d] {
            for x in &xs[d] {
                if *budget == 0 {
                    return false;
                }
                *budget -= 1;
                let free = pos.iter().zip(items).all(|((px, py), p)| {
                    !overlaps((x, y, &it.w, &it.h), (px, py, &p.w, &p.h))
                });
                if free {
                    pos.push((x.clone(), y.clone()));
                    if go(d + 1, items, xs, ys, pos, budget) {
                        return true;
                    }
                    pos.pop();
                }
            }
        }
        false
    }
    if go(0, items, &xs, &ys, &mut pos, budget) {
        Some(items.iter().zip(pos).map(|(i, (x, y))| (i.k, x, y)).collect())
    } else {
        None
    }
}

fn to_placements(out: Out, rects: &[Rect]) -> Vec<Placement> {
    let mut v: Vec<Option<Placement>> = vec![None; rects.len()];
    for (k, x, y) in out {
        v[k] = Some(Placement {
            id: rects[k].id.clone(),
            x,
            y,
        });
    }
    v.into_iter().flatten().collect()
}

/// Pack `rects` into `bin`. Fails with `ConditionViolated` when Steinberg's
/// condition does not hold.
pub fn steinberg_pack(rects: &[Rect], bin: &Bin) -> Result<Vec<Placement>> {
    steinberg_pack_stats(rects, bin).map(|(p, _)| p)
}

pub fn steinberg_pack_stats(rects: &[Rect], bin: &Bin) -> Result<(Vec<Placement>, PackStats)> {
    if !steinberg_condition(rects, bin) {
        return Err(Error::ConditionViolated(format!(
            "{} rectangles do not satisfy the condition for a {} x {} box",
            rects.len(),
            ratio::format(&bin.w),
            ratio::format(&bin.h)
        )));
    }
    let items: Vec<Item> = rects
        .iter()
        .enumerate()
        .map(|(k, r)| Item {
            k,
            w: r.w.clone(),
            h: r.h.clone(),
        })
        .collect();
    let accept = |out: Out, how: PackStats| -> Option<(Vec<Placement>, PackStats)> {
        let pl = to_placements(out, rects);
        verify_packing(&pl, rects, bin).is_empty().then_some((pl, how))
    };
    let mut ctx = Ctx { budget: 20_000 };
    if let Some(r) = pack(&items, &bin.w, &bin.h, &mut ctx).and_then(|o| accept(o, PackStats::Recursive)) {
        return Ok(r);
    }
    let mut orders: Vec<Vec<Item>> = Vec::new();
    let mut o = items.clone();
    o.sort_by(|a, b| b.h.cmp(&a.h).then(b.w.cmp(&a.w)));
    orders.push(o.clone());
    o.sort_by(|a, b| b.w.cmp(&a.w).then(b.h.cmp(&a.h)));
    orders.push(o.clone());
    o.sort_by_key(|r| std::cmp::Reverse(&r.w * &r.h));
    orders.push(o.clone());
    for ord in &orders {
        if let Some(r) = bottom_left(ord, &bin.w, &bin.h).and_then(|o| accept(o, PackStats::BottomLeft)) {
            return Ok(r);
        }
        let t = transpose(ord);
        if let Some(r) = bottom_left(&t, &bin.h, &bin.w)
            .map(|o| o.into_iter().map(|(k, x, y)| (k, y, x)).collect())
            .and_then(|o| accept(o, PackStats::BottomLeft))
        {
            return Ok(r);
        }
    }
    let mut budget = 2_000_000;
    if let Some(r) = normal_search(&orders[2], &bin.w, &bin.h, &mut budget).and_then(|o| accept(o, PackStats::Search)) {
        return Ok(r);
    }
    Err(Error::invariant(format!(
        "no packing found for {} rectangles satisfying the condition",
        rects.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let three: Vec<Rect> = (0..3).map(|k| Rect::ints(format!("s{k}"), 3, 3)).collect();
        let bin = Bin::new(ratio::int(10), ratio::int(6));
        let p = steinberg_pack(&three, &bin).unwrap();
        assert!(verify_packing(&p, &three, &bin).is_empty());
        assert!(steinberg_pack(&[], &bin).unwrap().is_empty());
        let b5 = Bin::new(ratio::int(5), ratio::int(5));
        assert!(matches!(
            steinberg_pack(&[Rect::ints("a", 6, 1)], &b5),
            Err(Error::ConditionViolated(_))
        ));
    }

    #[test]
    fn three_squares_need_a_row() {
        let sq: Vec<Rect> = (0..3)
            .map(|k| Rect::new(format!("q{k}"), ratio::frac(2, 5), ratio::frac(2, 5)))
            .collect();
        let bin = Bin::new(ratio::one(), ratio::one());
        let (p, how) = steinberg_pack_stats(&sq, &bin).unwrap();
        assert_eq!(how, PackStats::Recursive);
        assert!(verify_packing(&p, &sq, &bin).is_empty());
    }

    #[test]
    fn minimal_width_satisfies_condition() {
        let r = vec![Rect::ints("a", 2, 3), Rect::ints("b", 1, 5), Rect::ints("c", 4, 1)];
        let h = ratio::int(6);
        let w = min_width_for(&r, &h).unwrap();
        assert!(steinberg_condition(&r, &Bin::new(w.clone(), h.clone())));
        let smaller = &w - ratio::frac(1, 1000);
        assert!(!steinberg_condition(&r, &Bin::new(smaller, h)));
    }
}
