//! Canonical labelling of finite posets by individualization-refinement.
//!
//! Cells of an ordered partition are refined by counting strict
//! predecessors and successors per cell until stable. When a cell stays
//! non-singleton, each of its vertices is individualized in turn and the
//! search recurses. Among all leaves the lexicographically smallest matrix
//! of up-set rows wins. Vertices with identical strict down- and up-sets
//! are interchangeable, so only one of each such twin class is branched on.

use std::collections::HashMap;

use super::Poset;
use crate::set::{ElemSet, ElementId};

pub(super) struct CanonicalForm {
    pub code: String,
    pub order: Vec<ElementId>,
}

type Cells = Vec<Vec<usize>>;

pub(super) fn canonical_form(p: &Poset, point: Option<ElementId>) -> CanonicalForm {
    let n = p.len();
    if n == 0 {
        return CanonicalForm {
            code: "0:".to_owned(),
            order: Vec::new(),
        };
    }
    let mut keyed: Vec<((bool, usize, usize), usize)> = (0..n)
        .map(|v| {
            let e = ElementId::new(v);
            ((Some(e) != point, p.down(e).len(), p.up(e).len()), v)
        })
        .collect();
    keyed.sort();
    let mut cells: Cells = Vec::new();
    let mut last = None;
    for (key, v) in keyed {
        if last == Some(key) {
            cells.last_mut().unwrap().push(v);
        } else {
            cells.push(vec![v]);
            last = Some(key);
        }
    }
    refine(p, &mut cells);

    let twins = twin_classes(p);
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    search(p, cells, &twins, &mut best);
    let (rows, order) = best.expect("search visits at least one leaf");

    let body: Vec<String> = rows.iter().map(|r| format!("{r:x}")).collect();
    CanonicalForm {
        code: format!("{n}:{}", body.join(".")),
        order: order.into_iter().map(ElementId::new).collect(),
    }
}

fn search(p: &Poset, cells: Cells, twins: &[usize], best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.into_iter().flatten().collect();
        let rows = rows_for(p, &order);
        if best.as_ref().is_none_or(|(b, _)| rows < *b) {
            *best = Some((rows, order));
        }
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cells[target] {
        if tried.iter().any(|&u| twins[u] == twins[v]) {
            continue;
        }
        tried.push(v);
        let rest: Vec<usize> = cells[target].iter().copied().filter(|&u| u != v).collect();
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend_from_slice(&cells[..target]);
        next.push(vec![v]);
        next.push(rest);
        next.extend_from_slice(&cells[target + 1..]);
        refine(p, &mut next);
        search(p, next, twins, best);
    }
}

fn refine(p: &Poset, cells: &mut Cells) {
    let n = p.len();
    loop {
        let mut cell_of = vec![0usize; n];
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci;
            }
        }
        let k = cells.len();
        let signature = |v: usize| -> Vec<u32> {
            let e = ElementId::new(v);
            let mut sig = vec![0u32; 2 * k];
            for w in p.down(e).iter() {
                if w != e {
                    sig[cell_of[w.index()]] += 1;
                }
            }
            for w in p.up(e).iter() {
                if w != e {
                    sig[k + cell_of[w.index()]] += 1;
                }
            }
            sig
        };
        let mut next: Cells = Vec::with_capacity(k);
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        let stable = next.len() == cells.len();
        *cells = next;
        if stable {
            return;
        }
    }
}

fn twin_classes(p: &Poset) -> Vec<usize> {
    let mut seen: HashMap<(ElemSet, ElemSet), usize> = HashMap::new();
    p.elements()
        .map(|e| {
            let me = ElemSet::singleton(e);
            let key = (p.down(e).difference(me), p.up(e).difference(me));
            let next = seen.len();
            *seen.entry(key).or_insert(next)
        })
        .collect()
}

fn rows_for(p: &Poset, order: &[usize]) -> Vec<u64> {
    let mut pos = vec![0usize; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    order
        .iter()
        .map(|&v| {
            p.up(ElementId::new(v))
                .iter()
                .fold(0u64, |acc, w| acc | 1u64 << pos[w.index()])
        })
        .collect()
}

pub(super) fn decode(code: &str) -> Option<Poset> {
    let (n, body) = code.split_once(':')?;
    let n: usize = n.parse().ok()?;
    if n > crate::MAX_ELEMENTS {
        return None;
    }
    let rows: Vec<ElemSet> = if n == 0 {
        if !body.is_empty() {
            return None;
        }
        Vec::new()
    } else {
        body.split('.')
            .map(|r| u64::from_str_radix(r, 16).ok().map(ElemSet::from_bits))
            .collect::<Option<_>>()?
    };
    if rows.len() != n || rows.iter().any(|r| !r.is_subset(ElemSet::full(n))) {
        return None;
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    let poset = Poset::from_rows_unchecked(names, rows);
    poset.is_partial_order().then_some(poset)
}
