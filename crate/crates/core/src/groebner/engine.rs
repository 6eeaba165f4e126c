//! Buchberger's algorithm for submodules of graded free modules.
//!
//! An ideal is the rank-one case. Elements are sparse vectors whose terms are
//! `(component, monomial, coefficient)` triples kept sorted by a
//! [`ModuleOrder`]. Pair selection uses the sugar strategy; useless pairs are
//! discarded with the Gebauer–Möller criteria (the coprime-leading-term
//! criterion only applies in rank one).

use std::cmp::Ordering;

use crate::monomial::{Monomial, TermOrder};
use crate::scalar::{Field, Scalar};

pub(crate) type Term = (u32, Monomial, Scalar);

/// Order on the terms `m * e_c` of a free module `⊕ R(-shift_c)`.
///
/// Components `c < block` (if `block > 0`) dominate every other component;
/// within a block, degree-compatible orders compare `deg m + shift_c` first,
/// then the monomial order, then prefer smaller component indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub mono: TermOrder,
    pub shifts: Vec<i64>,
    pub block: usize,
}

impl ModuleOrder {
    pub fn ideal(order: TermOrder) -> Self {
        ModuleOrder { mono: order, shifts: vec![0], block: 0 }
    }

    pub fn graded(shifts: Vec<i64>) -> Self {
        ModuleOrder { mono: TermOrder::GrevLex, shifts, block: 0 }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn cmp(&self, c1: u32, m1: &Monomial, c2: u32, m2: &Monomial) -> Ordering {
        if self.block > 0 {
            let b1 = (c1 as usize) < self.block;
            let b2 = (c2 as usize) < self.block;
            if b1 != b2 {
                return b1.cmp(&b2);
            }
        }
        if self.mono.is_degree_compatible() {
            let d1 = m1.degree() as i64 + self.shifts[c1 as usize];
            let d2 = m2.degree() as i64 + self.shifts[c2 as usize];
            match d1.cmp(&d2) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match self.mono.cmp(m1, m2) {
            Ordering::Equal => c2.cmp(&c1),
            o => o,
        }
    }

    pub(crate) fn sort(&self, terms: &mut [Term]) {
        terms.sort_by(|a, b| self.cmp(b.0, &b.1, a.0, &a.1));
    }

    pub(crate) fn term_degree(&self, c: u32, m: &Monomial) -> i64 {
        m.degree() as i64 + self.shifts[c as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Elem {
    pub terms: Vec<Term>,
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    pub fn sugar(&self, order: &ModuleOrder) -> i64 {
        self.terms.iter().map(|(c, m, _)| order.term_degree(*c, m)).max().unwrap_or(0)
    }

    pub fn monic(mut self) -> Elem {
        if let Some((_, _, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.inv();
                for t in self.terms.iter_mut() {
                    t.2 = &t.2 * &inv;
                }
            }
        }
        self
    }
}

/// `a - coef * mono * b`, both sorted by `order`.
pub(crate) fn sub_mul(a: &[Term], b: &[Term], mono: &Monomial, coef: &Scalar, order: &ModuleOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(c, m, s)| (*c, m.mul(mono), s * coef)).peekable();
    while i < a.len() {
        let Some(bt) = bi.peek() else { break };
        match order.cmp(a[i].0, &a[i].1, bt.0, &bt.1) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (c, m, s) = bi.next().unwrap();
                out.push((c, m, -s));
            }
            Ordering::Equal => {
                let (c, m, s) = bi.next().unwrap();
                let v = &a[i].2 - &s;
                if !v.is_zero() {
                    out.push((c, m, v));
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(bi.map(|(c, m, s)| (c, m, -s)));
    out
}

fn find_reducer<'a>(c: u32, m: &Monomial, basis: &'a [Elem]) -> Option<&'a Elem> {
    basis.iter().find(|g| {
        let (gc, gm, _) = g.lead();
        *gc == c && gm.divides(m)
    })
}

/// Reduces only the leading term until it is irreducible.
pub(crate) fn top_reduce(mut f: Vec<Term>, basis: &[Elem], order: &ModuleOrder) -> Vec<Term> {
    while let Some((c, m, coef)) = f.first() {
        let Some(g) = find_reducer(*c, m, basis) else { break };
        let (_, gm, gc) = g.lead();
        let q = m.div(gm).unwrap();
        let s = coef / gc;
        f = sub_mul(&f, &g.terms, &q, &s, order);
    }
    f
}

/// Full normal form: every term of the result is irreducible by `basis`.
pub(crate) fn normal_form(f: &[Term], basis: &[Elem], order: &ModuleOrder) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    let mut f = f.to_vec();
    loop {
        f = top_reduce(f, basis, order);
        if f.is_empty() {
            break;
        }
        // Leading term is irreducible: move it to the remainder.
        let mut it = f.into_iter();
        rem.push(it.next().unwrap());
        f = it.collect();
    }
    rem
}

/// Reduces only terms whose component satisfies `keep_reducing`.
pub(crate) fn normal_form_where(
    f: &[Term],
    basis: &[Elem],
    order: &ModuleOrder,
    reducible: impl Fn(u32) -> bool,
) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    let mut f = f.to_vec();
    while let Some((c, m, coef)) = f.first().cloned() {
        if reducible(c) {
            if let Some(g) = find_reducer(c, &m, basis) {
                let (_, gm, gc) = g.lead();
                let q = m.div(gm).unwrap();
                let s = &coef / gc;
                f = sub_mul(&f, &g.terms, &q, &s, order);
                continue;
            }
        }
        rem.push(f.remove(0));
    }
    rem
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    comp: u32,
    lcm: Monomial,
    sugar: i64,
}

fn s_poly(f: &Elem, g: &Elem, lcm: &Monomial, order: &ModuleOrder, field: Field) -> Vec<Term> {
    let (_, fm, fc) = f.lead();
    let (_, gm, gc) = g.lead();
    let uf = lcm.div(fm).unwrap();
    let ug = lcm.div(gm).unwrap();
    let a: Vec<Term> = f.terms.iter().map(|(c, m, s)| (*c, m.mul(&uf), s / fc)).collect();
    let coef = &field.one() / gc;
    sub_mul(&a, &g.terms, &ug, &coef, order)
}

/// Computes the reduced Gröbner basis (monic, sorted by increasing leading term).
pub(crate) fn groebner(gens: Vec<Elem>, order: &ModuleOrder, field: Field) -> Vec<Elem> {
    let rank_one = order.rank() == 1;
    let mut polys: Vec<Elem> = Vec::new();
    let mut sugars: Vec<i64> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // Insert generators in increasing order so early pairs are cheap.
    let mut input: Vec<Elem> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    input.sort_by(|a, b| {
        let (ac, am, _) = a.lead();
        let (bc, bm, _) = b.lead();
        order.cmp(*ac, am, *bc, bm)
    });
    let mut queue: Vec<(Elem, i64)> = input.into_iter().map(|g| {
        let s = g.sugar(order);
        (g, s)
    }).collect();
    queue.reverse();

    loop {
        let next: Option<(Vec<Term>, i64)> = if let Some((g, s)) = queue.pop() {
            Some((g.terms, s))
        } else if !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let pa = &pairs[a];
                    let pb = &pairs[b];
                    pa.sugar
                        .cmp(&pb.sugar)
                        .then_with(|| order.cmp(pa.comp, &pa.lcm, pb.comp, &pb.lcm))
                        .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
                })
                .unwrap();
            let p = pairs.swap_remove(best);
            let sp = s_poly(&polys[p.i], &polys[p.j], &p.lcm, order, field);
            Some((sp, p.sugar))
        } else {
            None
        };
        let Some((f, sugar)) = next else { break };
        let active_refs: Vec<usize> = (0..polys.len()).filter(|&k| active[k]).collect();
        let h = {
            let reducers: Vec<&Elem> = active_refs.iter().map(|&k| &polys[k]).collect();
            top_reduce_refs(f, &reducers, order)
        };
        if h.is_empty() {
            continue;
        }
        let h = Elem { terms: h }.monic();
        let hidx = polys.len();
        polys.push(h);
        sugars.push(sugar);
        active.push(true);
        update(&polys, &sugars, &mut active, &mut pairs, hidx, rank_one);
    }

    // Minimal basis.
    let mut minimal: Vec<Elem> = Vec::new();
    let mut cands: Vec<&Elem> = (0..polys.len()).filter(|&k| active[k]).map(|k| &polys[k]).collect();
    cands.sort_by(|a, b| {
        let (ac, am, _) = a.lead();
        let (bc, bm, _) = b.lead();
        order.cmp(*ac, am, *bc, bm)
    });
    for g in cands {
        let (gc, gm, _) = g.lead();
        if minimal.iter().any(|h| {
            let (hc, hm, _) = h.lead();
            hc == gc && hm.divides(gm)
        }) {
            continue;
        }
        minimal.push(g.clone());
    }
    // Tail reduction.
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Elem> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g.clone()).collect();
        let lead = minimal[k].terms[0].clone();
        let tail = normal_form(&minimal[k].terms[1..], &others, order);
        let mut terms = vec![lead];
        terms.extend(tail);
        reduced.push(Elem { terms }.monic());
    }
    reduced
}

fn top_reduce_refs(mut f: Vec<Term>, basis: &[&Elem], order: &ModuleOrder) -> Vec<Term> {
    while let Some((c, m, coef)) = f.first() {
        let Some(g) = basis.iter().find(|g| {
            let (gc, gm, _) = g.lead();
            gc == c && gm.divides(m)
        }) else {
            break;
        };
        let (_, gm, gc) = g.lead();
        let q = m.div(gm).unwrap();
        let s = coef / gc;
        f = sub_mul(&f, &g.terms, &q, &s, order);
    }
    f
}

/// Gebauer–Möller update after inserting `polys[h]`.
fn update(
    polys: &[Elem],
    sugars: &[i64],
    active: &mut [bool],
    pairs: &mut Vec<Pair>,
    h: usize,
    rank_one: bool,
) {
    let (hc, hm, _) = polys[h].lead().clone();
    let hdeg = hm.degree() as i64;
    let make_pair = |g: usize| -> Option<Pair> {
        let (gc, gm, _) = polys[g].lead();
        if *gc != hc {
            return None;
        }
        let lcm = hm.lcm(gm);
        let l = lcm.degree() as i64;
        let sugar = (sugars[h] + l - hdeg).max(sugars[g] + l - gm.degree() as i64);
        Some(Pair { i: g, j: h, comp: hc, lcm, sugar })
    };
    let coprime = |p: &Pair| -> bool {
        rank_one && {
            let (_, gm, _) = polys[p.i].lead();
            gm.is_coprime(&hm)
        }
    };

    let c: Vec<Pair> = (0..h).filter(|&g| active[g]).filter_map(make_pair).collect();

    // Keep a new pair unless its lcm is a proper multiple of another new pair's lcm
    // (ties among equal lcms keep one representative, preferring a coprime one).
    let mut d: Vec<Pair> = Vec::new();
    for (k, p) in c.iter().enumerate() {
        if coprime(p) {
            d.push(p.clone());
            continue;
        }
        let dominated = c.iter().enumerate().any(|(k2, q)| {
            if k2 == k || !q.lcm.divides(&p.lcm) {
                return false;
            }
            if q.lcm != p.lcm {
                return true;
            }
            // equal lcm: keep the coprime one, otherwise the earliest
            coprime(q) || k2 < k
        });
        if !dominated {
            d.push(p.clone());
        }
    }
    let e: Vec<Pair> = d.into_iter().filter(|p| !coprime(p)).collect();

    // Old pairs made redundant by h.
    pairs.retain(|p| {
        if p.comp != hc || !hm.divides(&p.lcm) {
            return true;
        }
        let (_, im, _) = polys[p.i].lead();
        let (_, jm, _) = polys[p.j].lead();
        let li = im.lcm(&hm);
        let lj = jm.lcm(&hm);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(e);

    for g in 0..h {
        if active[g] {
            let (gc, gm, _) = polys[g].lead();
            if *gc == hc && hm.divides(gm) {
                active[g] = false;
            }
        }
    }
}
