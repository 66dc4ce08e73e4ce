//! Witness replay.
//!
//! Re-evaluates a notion's definition at a single assignment using only the
//! order predicate and the join table, in the element-wise "for all x, if
//! x <= u and x <= v then ..." form rather than through bound-set bitmasks.

use super::{Notion, Witness};
use crate::order::{JoinSemilattice, Poset};
use crate::set::{ElemSet, ElementId};

/// True iff `w` is an assignment at which `notion` fails on `j`.
pub fn witness_violates(j: &JoinSemilattice, notion: Notion, w: &Witness) -> bool {
    let p = j.poset();
    let elems = || p.elements();
    // "for all x, x <= u and x <= v implies x <= c"
    let below_both_implies = |u: ElementId, v: ElementId, c: ElementId| {
        elems().all(|x| !(p.le(x, u) && p.le(x, v)) || p.le(x, c))
    };
    match (notion, w) {
        (Notion::Gs, &Witness::Decomposition { a, b, x }) => {
            p.le(x, j.join(a, b)) && !exists_decomposition(j, a, b, |y| y == x)
        }
        (Notion::GsWeak, &Witness::Decomposition { a, b, x }) => {
            p.le(x, j.join(a, b)) && !exists_decomposition(j, a, b, |y| p.le(y, x))
        }
        (Notion::K, &Witness::Decomposition { a, b, x }) => {
            p.le(x, j.join(a, b))
                && !p.le(x, a)
                && !p.le(x, b)
                && !exists_decomposition(j, a, b, |y| y == x)
        }
        (Notion::Nd, &Witness::Context { h, a, b, c }) => {
            below_both_implies(h, a, c) && below_both_implies(h, b, c) && !below_both_implies(h, j.join(a, b), c)
        }
        (Notion::DveeN(n), &Witness::Join { x, args, c: Some(c) }) => {
            let args = args.0;
            arity_ok(args, n)
                && args.iter().all(|a| below_both_implies(x, a, c))
                && !below_both_implies(x, join_of(j, args), c)
        }
        (Notion::CN(n), &Witness::Join { x, args, c: None }) => {
            let args = args.0;
            // x fails to be below some y that bounds every z <= x with z <= some a_i.
            arity_ok(args, n)
                && p.le(x, join_of(j, args))
                && elems().any(|y| {
                    let bounds = elems().all(|z| {
                        !(p.le(z, x) && args.iter().any(|a| p.le(z, a))) || p.le(z, y)
                    });
                    bounds && !p.le(x, y)
                })
        }
        (Notion::Lr, &Witness::Triple { a, b, c }) => lr_fails(p, a, b, c, |z| {
            p.le(z, c) && p.le(z, j.join(a, b))
        }),
        (Notion::LrPoset, Witness::Triple { .. }) => witness_violates_poset(p, w),
        (Notion::B, &Witness::Meet { args, x }) => meet_fails(j, args.0, x),
        (Notion::S(n), &Witness::Meet { args, x }) => arity_ok(args.0, n) && meet_fails(j, args.0, x),
        (Notion::DLattice, &Witness::Triple { a, b, c }) => {
            let meet = |u, v| naive_glb(p, &[u, v]);
            match (meet(a, j.join(b, c)), meet(a, b), meet(a, c)) {
                (Some(l), Some(ab), Some(ac)) => l != j.join(ab, ac),
                _ => false,
            }
        }
        _ => false,
    }
}

/// Replay for LR_POSET: some `z` lies in `({c} ∪ {a,b}^u)^l` but not in
/// `({c,a}^l ∪ {c,b}^l)^{ul}`.
pub fn witness_violates_poset(p: &Poset, w: &Witness) -> bool {
    let &Witness::Triple { a, b, c } = w else {
        return false;
    };
    lr_fails(p, a, b, c, |z| {
        p.le(z, c)
            && p.elements()
                .filter(|&u| p.le(a, u) && p.le(b, u))
                .all(|u| p.le(z, u))
    })
}

fn lr_fails(p: &Poset, a: ElementId, b: ElementId, c: ElementId, in_left: impl Fn(ElementId) -> bool) -> bool {
    let in_union = |z: ElementId| p.le(z, c) && (p.le(z, a) || p.le(z, b));
    // y is an upper bound of the union.
    let bounds_union = |y: ElementId| p.elements().filter(|&z| in_union(z)).all(|z| p.le(z, y));
    p.elements()
        .filter(|&z| in_left(z))
        .any(|z| p.elements().any(|y| bounds_union(y) && !p.le(z, y)))
}

fn exists_decomposition(
    j: &JoinSemilattice,
    a: ElementId,
    b: ElementId,
    accept: impl Fn(ElementId) -> bool,
) -> bool {
    let p = j.poset();
    p.elements().any(|a1| {
        p.le(a1, a) && p.elements().any(|b1| p.le(b1, b) && accept(j.join(a1, b1)))
    })
}

fn meet_fails(j: &JoinSemilattice, args: ElemSet, x: ElementId) -> bool {
    let p = j.poset();
    let list: Vec<ElementId> = args.iter().collect();
    let Some(meet) = naive_glb(p, &list) else {
        return false;
    };
    let shifted: Vec<ElementId> = list.iter().map(|&a| j.join(x, a)).collect();
    naive_glb(p, &shifted) != Some(j.join(x, meet))
}

fn naive_glb(p: &Poset, items: &[ElementId]) -> Option<ElementId> {
    let lower: Vec<ElementId> = p
        .elements()
        .filter(|&z| items.iter().all(|&i| p.le(z, i)))
        .collect();
    lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&z| p.le(z, m)))
}

fn join_of(j: &JoinSemilattice, args: ElemSet) -> ElementId {
    args.iter().reduce(|acc, a| j.join(acc, a)).expect("nonempty argument set")
}

fn arity_ok(args: ElemSet, n: usize) -> bool {
    !args.is_empty() && args.len() <= n
}
