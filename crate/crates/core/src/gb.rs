//! Homogeneous Buchberger algorithm for submodules of graded free modules.
//!
//! Pairs are processed by the normal strategy (lowest lcm degree first, then
//! creation order) with the Gebauer–Möller criteria. The product criterion is
//! only sound for ideals, so it is enabled per call.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::vector::{merge, mul_term_raw, Term, TermOrder};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Engine {
    pub field: Field,
    pub ord: TermOrder,
    pub max_degree: i32,
    pub product_criterion: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub terms: Vec<Term>,
    mask: u32,
}

impl Elem {
    pub fn new(terms: Vec<Term>) -> Self {
        let mask = terms[0].mono.support();
        Elem { terms, mask }
    }

    #[inline]
    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Monomial,
    alive: bool,
}

/// Leading-term index: basis element indices grouped by position.
#[derive(Default)]
pub(crate) struct Basis {
    pub elems: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
}

impl Basis {
    pub fn from_elems(elems: Vec<Elem>) -> Self {
        let mut b = Basis::default();
        for e in elems {
            b.push(e);
        }
        b
    }

    pub fn push(&mut self, e: Elem) {
        let p = e.lead().pos as usize;
        if self.by_pos.len() <= p {
            self.by_pos.resize(p + 1, Vec::new());
        }
        self.by_pos[p].push(self.elems.len());
        self.elems.push(e);
    }

    #[inline]
    fn divisor(&self, t: &Term) -> Option<&Elem> {
        let list = self.by_pos.get(t.pos as usize)?;
        let tm = t.mono.support();
        for &k in list {
            let e = &self.elems[k];
            if e.mask & !tm == 0 && e.lead().mono.divides(&t.mono) {
                return Some(e);
            }
        }
        None
    }
}

impl Engine {
    /// Full normal form of `f` (sorted under `self.ord`) modulo a monic basis.
    pub fn reduce(&self, mut f: Vec<Term>, basis: &Basis) -> Vec<Term> {
        let mut rem = Vec::new();
        let mut start = 0;
        while start < f.len() {
            let t = f[start];
            match basis.divisor(&t) {
                Some(g) => {
                    let m = g.lead().mono.quotient_of(&t.mono).unwrap();
                    let gm = mul_term_raw(&g.terms[1..], &m, self.field.neg(t.c), self.field);
                    f = merge(&f[start + 1..], 1, &gm, 1, &self.ord, self.field);
                    start = 0;
                }
                None => {
                    rem.push(t);
                    start += 1;
                }
            }
        }
        rem
    }

    fn monic(&self, mut v: Vec<Term>) -> Vec<Term> {
        let c = v[0].c;
        if c != 1 {
            let inv = self.field.inv(c);
            for t in v.iter_mut() {
                t.c = self.field.mul(inv, t.c);
            }
        }
        v
    }

    fn spoly(&self, a: &Elem, b: &Elem, lcm: &Monomial) -> Vec<Term> {
        let ma = a.lead().mono.quotient_of(lcm).unwrap();
        let mb = b.lead().mono.quotient_of(lcm).unwrap();
        let sa = mul_term_raw(&a.terms[1..], &ma, 1, self.field);
        let sb = mul_term_raw(&b.terms[1..], &mb, 1, self.field);
        merge(&sa, 1, &sb, self.field.neg(1), &self.ord, self.field)
    }

    /// Reduced Gröbner basis of the span of `input`, sorted by ascending lead.
    pub fn groebner(&self, input: Vec<Vec<Term>>) -> Result<Vec<Vec<Term>>> {
        let mut inputs: Vec<Vec<Term>> = Vec::with_capacity(input.len());
        for mut v in input {
            if v.is_empty() {
                continue;
            }
            v.sort_by(|a, b| self.ord.cmp(b, a));
            let d = v[0].deg;
            if v.iter().any(|t| t.deg != d) {
                return Err(Error::Inhomogeneous(format!("generator of degree {d} has mixed-degree terms")));
            }
            inputs.push(v);
        }
        inputs.sort_by_key(|v| v[0].deg);
        let mut next_input = 0;

        let mut basis = Basis::default();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(i32, usize)>> = BinaryHeap::new();

        loop {
            while let Some(&Reverse((_, k))) = heap.peek() {
                if pairs[k].alive {
                    break;
                }
                heap.pop();
            }
            let pair_deg = heap.peek().map(|r| r.0 .0);
            let input_deg = inputs.get(next_input).map(|v| v[0].deg);
            let cand = match (input_deg, pair_deg) {
                (None, None) => break,
                (Some(di), Some(dp)) if dp < di => None,
                (Some(_), _) => {
                    next_input += 1;
                    Some(core::mem::take(&mut inputs[next_input - 1]))
                }
                (None, Some(_)) => None,
            };
            let cand = match cand {
                Some(v) => v,
                None => {
                    let Reverse((d, k)) = heap.pop().unwrap();
                    if d > self.max_degree {
                        return Err(Error::CapExceeded(format!(
                            "Gröbner basis needs degree {d} > maxDegree {}",
                            self.max_degree
                        )));
                    }
                    pairs[k].alive = false;
                    let p = &pairs[k];
                    self.spoly(&basis.elems[p.i], &basis.elems[p.j], &p.lcm)
                }
            };
            let r = self.reduce(cand, &basis);
            if r.is_empty() {
                continue;
            }
            let h = Elem::new(self.monic(r));
            self.update(&basis, &mut pairs, &mut heap, &h);
            basis.push(h);
        }
        Ok(self.interreduce(basis))
    }

    fn update(&self, basis: &Basis, pairs: &mut Vec<Pair>, heap: &mut BinaryHeap<Reverse<(i32, usize)>>, h: &Elem) {
        let k = basis.elems.len();
        let hl = h.lead();
        // B criterion on existing pairs
        for p in pairs.iter_mut().filter(|p| p.alive && p.pos == hl.pos) {
            if hl.mono.divides(&p.lcm) {
                let li = basis.elems[p.i].lead().mono.lcm(&hl.mono);
                let lj = basis.elems[p.j].lead().mono.lcm(&hl.mono);
                if li != p.lcm && lj != p.lcm {
                    p.alive = false;
                }
            }
        }
        // candidate new pairs
        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        if let Some(list) = basis.by_pos.get(hl.pos as usize) {
            for &i in list {
                let gl = basis.elems[i].lead().mono;
                cands.push((i, gl.lcm(&hl.mono), gl.is_coprime(&hl.mono)));
            }
        }
        cands.sort_by_key(|c| (c.1.degree(), c.0));
        // M criterion: drop if another candidate's lcm properly divides ours
        let m_ok: Vec<bool> = cands.iter().map(|c| !cands.iter().any(|o| o.1 != c.1 && o.1.divides(&c.1))).collect();
        let mut seen: Vec<Monomial> = Vec::new();
        for (idx, c) in cands.iter().enumerate() {
            if !m_ok[idx] || seen.contains(&c.1) {
                continue;
            }
            seen.push(c.1);
            if self.product_criterion && cands.iter().zip(&m_ok).any(|(o, &ok)| ok && o.1 == c.1 && o.2) {
                continue;
            }
            let deg = c.1.degree() as i32 + (hl.deg - hl.mono.degree() as i32);
            heap.push(Reverse((deg, pairs.len())));
            pairs.push(Pair { i: c.0, j: k, pos: hl.pos, lcm: c.1, alive: true });
        }
    }

    fn interreduce(&self, basis: Basis) -> Vec<Vec<Term>> {
        let elems = basis.elems;
        let mut keep: Vec<Elem> = Vec::new();
        for (a, e) in elems.iter().enumerate() {
            let redundant = elems.iter().enumerate().any(|(b, o)| {
                b != a
                    && o.lead().pos == e.lead().pos
                    && o.lead().mono.divides(&e.lead().mono)
                    && (o.lead().mono != e.lead().mono || b < a)
            });
            if !redundant {
                keep.push(e.clone());
            }
        }
        let idx = Basis::from_elems(keep.clone());
        let mut out: Vec<Vec<Term>> = keep
            .iter()
            .map(|e| {
                let mut v = alloc::vec![e.terms[0]];
                v.extend(self.reduce(e.terms[1..].to_vec(), &idx));
                v
            })
            .collect();
        out.sort_by(|a, b| self.ord.cmp(&a[0], &b[0]));
        out
    }

    /// Buchberger's criterion: every S-vector of `basis` reduces to zero.
    pub fn verify(&self, basis: &[Vec<Term>]) -> bool {
        let elems: Vec<Elem> = basis.iter().map(|v| Elem::new(self.monic(v.clone()))).collect();
        let idx = Basis::from_elems(elems.clone());
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                let (a, b) = (elems[i].lead(), elems[j].lead());
                if a.pos != b.pos {
                    continue;
                }
                let l = a.mono.lcm(&b.mono);
                let s = self.spoly(&elems[i], &elems[j], &l);
                if !self.reduce(s, &idx).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
