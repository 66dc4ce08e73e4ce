//! Brute-force reference implementations over plain boolean matrices.
//!
//! Nothing here uses the bitset machinery of the library: every notion is
//! evaluated from its definition with nested loops, tuples are enumerated
//! with repetition, and isomorphism is decided by trying all permutations.

#![allow(dead_code)]

use jsl_core::{JoinSemilattice, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub n: usize,
    pub le: Vec<Vec<bool>>,
}

impl Model {
    pub fn from_poset(p: &Poset) -> Model {
        let n = p.len();
        let ids: Vec<_> = p.elements().collect();
        let le = (0..n).map(|a| (0..n).map(|b| p.le(ids[a], ids[b])).collect()).collect();
        Model { n, le }
    }

    pub fn to_poset(&self) -> Poset {
        let names = (0..self.n).map(|i| format!("e{i}")).collect();
        Poset::from_fn(names, |a, b| self.le[a][b], 64).expect("oracle model is a partial order")
    }

    pub fn to_jsl(&self) -> JoinSemilattice {
        JoinSemilattice::new(self.to_poset()).expect("oracle model is a join-semilattice")
    }

    pub fn elems(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn is_partial_order(&self) -> bool {
        let r = self.elems();
        r.clone().all(|a| self.le[a][a])
            && r.clone().all(|a| r.clone().all(|b| !(self.le[a][b] && self.le[b][a]) || a == b))
            && r.clone().all(|a| {
                r.clone().all(|b| r.clone().all(|c| !(self.le[a][b] && self.le[b][c]) || self.le[a][c]))
            })
    }

    pub fn lower(&self, items: &[usize]) -> Vec<usize> {
        self.elems().filter(|&z| items.iter().all(|&i| self.le[z][i])).collect()
    }

    pub fn upper(&self, items: &[usize]) -> Vec<usize> {
        self.elems().filter(|&z| items.iter().all(|&i| self.le[i][z])).collect()
    }

    pub fn least(&self, items: &[usize]) -> Option<usize> {
        items.iter().copied().find(|&m| items.iter().all(|&z| self.le[m][z]))
    }

    pub fn greatest(&self, items: &[usize]) -> Option<usize> {
        items.iter().copied().find(|&m| items.iter().all(|&z| self.le[z][m]))
    }

    pub fn lub(&self, items: &[usize]) -> Option<usize> {
        self.least(&self.upper(items))
    }

    pub fn glb(&self, items: &[usize]) -> Option<usize> {
        self.greatest(&self.lower(items))
    }

    pub fn is_jsl(&self) -> bool {
        self.elems().all(|a| self.elems().all(|b| self.lub(&[a, b]).is_some()))
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lub(&[a, b]).expect("join exists")
    }

    pub fn join_all(&self, items: &[usize]) -> usize {
        items.iter().copied().reduce(|x, y| self.join(x, y)).expect("nonempty")
    }

    pub fn is_lattice(&self) -> bool {
        self.elems().all(|a| self.elems().all(|b| self.glb(&[a, b]).is_some()))
    }

    pub fn is_downward_directed(&self) -> bool {
        self.elems().all(|a| self.elems().all(|b| !self.lower(&[a, b]).is_empty()))
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Model {
        let mut le = vec![vec![false; self.n]; self.n];
        for a in self.elems() {
            for b in self.elems() {
                le[perm[a]][perm[b]] = self.le[a][b];
            }
        }
        Model { n: self.n, le }
    }

    /// Minimum of the row-major relation bits over all relabelings.
    pub fn brute_canonical(&self) -> Vec<bool> {
        let mut best: Option<Vec<bool>> = None;
        for perm in permutations(self.n) {
            let m = self.permuted(&perm);
            let bits: Vec<bool> = m.le.iter().flatten().copied().collect();
            if best.as_ref().is_none_or(|b| bits < *b) {
                best = Some(bits);
            }
        }
        best.unwrap_or_default()
    }

    pub fn brute_isomorphic(&self, other: &Model) -> bool {
        self.n == other.n && permutations(self.n).any(|p| self.permuted(&p) == *other)
    }
}

pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut all = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut all);
    all.into_iter()
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap(k - 1, cur, out);
}

/// All tuples of length `len` over `0..n`.
pub fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every labelled join-semilattice on `n` elements, by trying each
/// orientation of each pair.
pub fn labeled_jsls(n: usize) -> Vec<Model> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut c = code;
        for &(a, b) in &pairs {
            match c % 3 {
                1 => le[a][b] = true,
                2 => le[b][a] = true,
                _ => {}
            }
            c /= 3;
        }
        let m = Model { n, le };
        if m.is_partial_order() && m.is_jsl() {
            out.push(m);
        }
    }
    out
}

/// One representative per isomorphism class.
pub fn classes(models: Vec<Model>) -> Vec<Model> {
    let mut reps: Vec<(Vec<bool>, Model)> = Vec::new();
    for m in models {
        let key = m.brute_canonical();
        if !reps.iter().any(|(k, _)| *k == key) {
            reps.push((key, m));
        }
    }
    reps.into_iter().map(|(_, m)| m).collect()
}

// Notions, straight from their definitions.

pub fn gs(m: &Model) -> bool {
    m.elems().all(|a| {
        m.elems().all(|b| {
            m.elems().all(|x| {
                !m.le[x][m.join(a, b)]
                    || m.elems().any(|a1| m.le[a1][a] && m.elems().any(|b1| m.le[b1][b] && m.join(a1, b1) == x))
            })
        })
    })
}

pub fn gs_weak(m: &Model) -> bool {
    m.elems().all(|a| {
        m.elems().all(|b| {
            m.elems().all(|x| {
                !m.le[x][m.join(a, b)]
                    || m.elems().any(|a1| m.le[a1][a] && m.elems().any(|b1| m.le[b1][b] && m.le[m.join(a1, b1)][x]))
            })
        })
    })
}

pub fn k(m: &Model) -> bool {
    m.elems().all(|a| {
        m.elems().all(|b| {
            m.elems().all(|x| {
                !(m.le[x][m.join(a, b)] && !m.le[x][a] && !m.le[x][b])
                    || m.elems().any(|a1| m.le[a1][a] && m.elems().any(|b1| m.le[b1][b] && m.join(a1, b1) == x))
            })
        })
    })
}

/// `{u, v}^l ⊆ {c}^l`, element-wise.
fn below_both_implies(m: &Model, u: usize, v: usize, c: usize) -> bool {
    m.elems().all(|z| !(m.le[z][u] && m.le[z][v]) || m.le[z][c])
}

pub fn nd(m: &Model) -> bool {
    m.elems().all(|h| {
        m.elems().all(|a| {
            m.elems().all(|b| {
                m.elems().all(|c| {
                    !(below_both_implies(m, h, a, c) && below_both_implies(m, h, b, c))
                        || below_both_implies(m, h, m.join(a, b), c)
                })
            })
        })
    })
}

pub fn dvee(m: &Model, n: usize) -> bool {
    tuples(m.n, n).iter().all(|args| {
        m.elems().all(|x| {
            m.elems().all(|c| {
                !args.iter().all(|&a| below_both_implies(m, x, a, c))
                    || below_both_implies(m, x, m.join_all(args), c)
            })
        })
    })
}

/// `x ∈ (⋃ {x, a_i}^l)^{ul}` whenever `x <= a_1 ∨ ... ∨ a_n`.
pub fn c_n(m: &Model, n: usize) -> bool {
    tuples(m.n, n).iter().all(|args| {
        m.elems().all(|x| {
            if !m.le[x][m.join_all(args)] {
                return true;
            }
            let union: Vec<usize> = m
                .elems()
                .filter(|&z| args.iter().any(|&a| m.le[z][x] && m.le[z][a]))
                .collect();
            let ub = m.upper(&union);
            m.lower(&ub).contains(&x)
        })
    })
}

pub fn lr(m: &Model) -> bool {
    m.elems().all(|a| {
        m.elems().all(|b| {
            m.elems().all(|c| {
                let union: Vec<usize> = m
                    .elems()
                    .filter(|&z| (m.le[z][c] && m.le[z][a]) || (m.le[z][c] && m.le[z][b]))
                    .collect();
                let closure = m.lower(&m.upper(&union));
                m.lower(&[c, m.join(a, b)]).iter().all(|z| closure.contains(z))
            })
        })
    })
}

/// `({c,a}^l ∪ {c,b}^l)^{ul} = ({c} ∪ {a,b}^u)^l` on a bare poset, both inclusions.
pub fn lr_poset(m: &Model) -> bool {
    m.elems().all(|a| {
        m.elems().all(|b| {
            m.elems().all(|c| {
                let union: Vec<usize> = m
                    .elems()
                    .filter(|&z| m.le[z][c] && (m.le[z][a] || m.le[z][b]))
                    .collect();
                let left = m.lower(&m.upper(&union));
                let mut gens = m.upper(&[a, b]);
                gens.push(c);
                left == m.lower(&gens)
            })
        })
    })
}

/// The meet-distribution condition for every tuple of length `len`.
fn meets_distribute(m: &Model, len: usize) -> bool {
    tuples(m.n, len).iter().all(|args| {
        let Some(meet) = m.glb(args) else { return true };
        m.elems().all(|x| {
            let shifted: Vec<usize> = args.iter().map(|&a| m.join(x, a)).collect();
            m.glb(&shifted) == Some(m.join(x, meet))
        })
    })
}

pub fn s_n(m: &Model, n: usize) -> bool {
    meets_distribute(m, n)
}

/// B through every nonempty subset, listed by bitmask.
pub fn b(m: &Model) -> bool {
    (1u64..(1 << m.n)).all(|mask| {
        let args: Vec<usize> = m.elems().filter(|&i| mask >> i & 1 == 1).collect();
        let Some(meet) = m.glb(&args) else { return true };
        m.elems().all(|x| {
            let shifted: Vec<usize> = args.iter().map(|&a| m.join(x, a)).collect();
            m.glb(&shifted) == Some(m.join(x, meet))
        })
    })
}

pub fn distributive_lattice(m: &Model) -> bool {
    m.is_lattice()
        && m.elems().all(|a| {
            m.elems().all(|b| {
                m.elems().all(|c| {
                    let meet = |x, y| m.glb(&[x, y]).unwrap();
                    meet(a, m.join(b, c)) == m.join(meet(a, b), meet(a, c))
                })
            })
        })
}

/// `a → b` as the maximum of its candidate set.
pub fn arrow(m: &Model, a: usize, b: usize) -> Option<usize> {
    let cands: Vec<usize> = m.elems().filter(|&c| below_both_implies(m, a, c, b)).collect();
    m.greatest(&cands)
}

pub fn arrow_total(m: &Model) -> bool {
    m.elems().all(|a| m.elems().all(|b| arrow(m, a, b).is_some()))
}

// Ideal families as lists of membership vectors.

pub type Subset = Vec<bool>;

pub fn is_ideal(m: &Model, s: &Subset) -> bool {
    s.iter().any(|&v| v)
        && m.elems().all(|x| !s[x] || m.elems().all(|y| !m.le[y][x] || s[y]))
        && m.elems().all(|x| m.elems().all(|y| !(s[x] && s[y]) || s[m.join(x, y)]))
}

pub fn subsets(n: usize) -> Vec<Subset> {
    (0u64..(1 << n)).map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect()).collect()
}

pub fn ideals(m: &Model) -> Vec<Subset> {
    subsets(m.n).into_iter().filter(|s| is_ideal(m, s)).collect()
}

pub fn principal(m: &Model, a: usize) -> Subset {
    m.elems().map(|x| m.le[x][a]).collect()
}

/// Intersections of nonempty sets of principal ideals, deduplicated.
pub fn id_fp(m: &Model) -> Vec<Subset> {
    let mut out: Vec<Subset> = Vec::new();
    for gens in subsets(m.n).into_iter().filter(|g| g.iter().any(|&v| v)) {
        let s: Subset = m.elems().map(|x| m.elems().all(|a| !gens[a] || m.le[x][a])).collect();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Inclusion order on a family as a model.
pub fn inclusion(family: &[Subset]) -> Model {
    let n = family.len();
    let le = (0..n)
        .map(|i| (0..n).map(|j| family[i].iter().zip(&family[j]).all(|(&a, &b)| !a || b)).collect())
        .collect();
    Model { n, le }
}

pub fn family_distributive(family: &[Subset]) -> bool {
    let m = inclusion(family);
    m.is_jsl() && distributive_lattice(&m)
}

/// The flags the library records, recomputed from definitions.
pub struct Flags {
    pub gs: bool,
    pub gs_weak: bool,
    pub k: bool,
    pub nd: bool,
    pub lr: bool,
    pub lr_poset: bool,
    pub b: bool,
    pub s2: bool,
    pub s3: bool,
    pub c2: bool,
    pub c3: bool,
    pub dvee2: bool,
    pub dvee3: bool,
    pub lattice: bool,
    pub d_lattice: bool,
    pub directed: bool,
    pub arrow_total: bool,
    pub id: bool,
    pub id_empty: bool,
    pub id_fp: bool,
}

pub fn flags(m: &Model) -> Flags {
    let all = ideals(m);
    let mut with_empty = all.clone();
    with_empty.push(vec![false; m.n]);
    Flags {
        gs: gs(m),
        gs_weak: gs_weak(m),
        k: k(m),
        nd: nd(m),
        lr: lr(m),
        lr_poset: lr_poset(m),
        b: b(m),
        s2: s_n(m, 2),
        s3: s_n(m, 3),
        c2: c_n(m, 2),
        c3: c_n(m, 3),
        dvee2: dvee(m, 2),
        dvee3: dvee(m, 3),
        lattice: m.is_lattice(),
        d_lattice: distributive_lattice(m),
        directed: m.is_downward_directed(),
        arrow_total: arrow_total(m),
        id: family_distributive(&all),
        id_empty: family_distributive(&with_empty),
        id_fp: family_distributive(&id_fp(m)),
    }
}
