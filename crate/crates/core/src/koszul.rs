//! Koszul homology Hᵢ(𝐱;M), the sequence predicates built on colon
//! computations, partial Euler characteristics, and a randomized
//! construction of d-sequence systems of parameters.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ops::{annihilator, colon_elem, h0, intersect, preimage};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::series::Length;
use crate::submodule::{Module, Submodule};
use crate::vector::{FreeVector, Term};

/// 𝐱 = x₁..x_r, homogeneous elements of R (given by representatives in S).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterSequence {
    elems: Vec<Poly>,
}

impl ParameterSequence {
    pub fn new(ring: &Ring, elems: Vec<Poly>) -> Result<Self> {
        for e in &elems {
            if !e.is_homogeneous() {
                return Err(Error::Inhomogeneous(ring.fmt_poly(e)));
            }
            if e.arity() > ring.nvars() {
                return Err(Error::ArityMismatch { expected: ring.nvars(), found: e.arity() });
            }
        }
        Ok(ParameterSequence { elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Poly] {
        &self.elems
    }

    /// x₁..x_k.
    pub fn prefix(&self, k: usize) -> ParameterSequence {
        ParameterSequence { elems: self.elems[..k].to_vec() }
    }

    /// Generators of the prefix ideal I_k = (x₁..x_k).
    pub fn prefix_ideal(&self, k: usize) -> &[Poly] {
        &self.elems[..k]
    }

    /// x₁^{e₁}..x_r^{e_r}.
    pub fn powers(&self, ring: &Ring, exps: &[u32]) -> ParameterSequence {
        ParameterSequence { elems: self.elems.iter().zip(exps).map(|(x, &e)| x.pow(e, ring.ctx())).collect() }
    }

    pub fn permuted(&self, perm: &[usize]) -> ParameterSequence {
        ParameterSequence { elems: perm.iter().map(|&i| self.elems[i].clone()).collect() }
    }

    fn degree(&self, i: usize) -> i32 {
        self.elems[i].degree().unwrap_or(0) as i32
    }
}

/// I·V + U for the ideal generated by `ideal`: the lift of I·M.
pub fn ideal_times(ring: &Ring, m: &Module, ideal: &[Poly]) -> Result<Submodule> {
    if ideal.is_empty() {
        return Ok(m.den().clone());
    }
    let gens = m.num().times_ideal(ring, ideal);
    m.den().add_gens(ring, &gens)
}

/// M/IM for I generated by `ideal`.
pub fn quotient_by_ideal(ring: &Ring, m: &Module, ideal: &[Poly]) -> Result<Module> {
    Ok(Module::from_parts(m.num().clone(), ideal_times(ring, m, ideal)?))
}

fn subsets(r: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, r: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for j in start..r {
            cur.push(j);
            rec(j + 1, r, i, cur, out);
            cur.pop();
        }
    }
    rec(0, r, i, &mut cur, &mut out);
    out
}

/// The lifted Koszul complex Λⁱ(Sʳ) ⊗ F with its block layout.
struct KoszulLevel {
    sets: Vec<Vec<usize>>,
    shifts: Vec<i32>,
}

impl KoszulLevel {
    fn new(s: &ParameterSequence, base: &[i32], i: usize) -> Self {
        let sets = subsets(s.len(), i);
        let mut shifts = Vec::new();
        for set in &sets {
            let d: i32 = set.iter().map(|&j| s.degree(j)).sum();
            shifts.extend(base.iter().map(|b| b + d));
        }
        KoszulLevel { sets, shifts }
    }

    fn index(&self, set: &[usize]) -> usize {
        self.sets.iter().position(|s| s == set).unwrap()
    }

    /// v placed in the block of `set`.
    fn place(&self, v: &FreeVector, set_idx: usize, rank: usize, deg_off: i32) -> Vec<Term> {
        v.terms().iter().map(|t| Term { pos: t.pos + (set_idx * rank) as u32, deg: t.deg + deg_off, ..*t }).collect()
    }
}

/// ∂(e_J ⊗ v) = Σ_t (−1)^t x_{j_t} e_{J∖j_t} ⊗ v.
fn boundary(
    ring: &Ring,
    s: &ParameterSequence,
    lower: &KoszulLevel,
    set: &[usize],
    v: &FreeVector,
    rank: usize,
) -> FreeVector {
    let ord = ring.order();
    let f = ring.field();
    let mut terms = Vec::new();
    for (t, &j) in set.iter().enumerate() {
        let mut rest = set.to_vec();
        rest.remove(t);
        let idx = lower.index(&rest);
        let off: i32 = rest.iter().map(|&k| s.degree(k)).sum();
        let mut xv = v.mul_poly(&s.elems[j], &ord, f);
        if t % 2 == 1 {
            xv = xv.scale(f.neg(1), f);
        }
        terms.extend(lower.place(&xv, idx, rank, off));
    }
    FreeVector::from_terms(terms, &ord, f)
}

/// Hᵢ(𝐱;M) as the subquotient ker ∂ᵢ / im ∂ᵢ₊₁ of the lifted complex.
pub fn koszul_homology(ring: &Ring, m: &Module, s: &ParameterSequence, i: usize) -> Result<Module> {
    let r = s.len();
    if i > r {
        return Err(Error::IndexOutOfRange { index: i, max: r });
    }
    let rank = m.shifts().len();
    let gens = m.min_generators(ring)?;
    let here = KoszulLevel::new(s, m.shifts(), i);
    let den_blocks = |lvl: &KoszulLevel| -> Vec<FreeVector> {
        let mut out = Vec::new();
        for (k, set) in lvl.sets.iter().enumerate() {
            let off: i32 = set.iter().map(|&j| s.degree(j)).sum();
            for b in m.den().basis() {
                out.push(FreeVector::from_sorted(lvl.place(b, k, rank, off)));
            }
        }
        out
    };
    let mut domain = Vec::new();
    for (k, set) in here.sets.iter().enumerate() {
        let off: i32 = set.iter().map(|&j| s.degree(j)).sum();
        for g in &gens {
            domain.push(FreeVector::from_sorted(here.place(g, k, rank, off)));
        }
    }
    let cycles = if i == 0 {
        let mut all = domain.clone();
        all.extend(den_blocks(&here));
        Submodule::new(ring, &here.shifts, &all)?
    } else {
        let lower = KoszulLevel::new(s, m.shifts(), i - 1);
        let mut images = Vec::new();
        for set in &here.sets {
            for g in &gens {
                images.push(boundary(ring, s, &lower, set, g, rank));
            }
        }
        let z = preimage(ring, &here.shifts, &domain, &lower.shifts, &images, &den_blocks(&lower))?;
        // preimage only spans combinations of V-generators; add U-blocks
        z.add_gens(ring, &den_blocks(&here))?
    };
    let mut bgens = den_blocks(&here);
    if i < r {
        let upper = KoszulLevel::new(s, m.shifts(), i + 1);
        for set in &upper.sets {
            for g in &gens {
                let b = boundary(ring, s, &here, set, g, rank);
                if !b.is_zero() {
                    bgens.push(b);
                }
            }
        }
    }
    let boundaries = Submodule::new(ring, &here.shifts, &bgens)?;
    Ok(Module::from_parts(cycles, boundaries))
}

/// Lengths of Koszul homology and the partial Euler characteristics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulReport {
    /// h₀ = λ(H⁰_𝔪(H₀)), hᵢ = λ(Hᵢ) for i > 0.
    pub h: Vec<Length>,
    /// χ₁(x₁..x_k;M) for k = 1..r; `None` where some homology is infinite.
    pub chi1: Vec<Option<i64>>,
}

impl KoszulReport {
    pub fn all_finite(&self) -> bool {
        self.h.iter().all(|l| l.is_finite())
    }

    /// Finite h values, if all are finite.
    pub fn values(&self) -> Option<Vec<u64>> {
        self.h.iter().map(|l| l.finite()).collect()
    }
}

/// λ(Hᵢ(𝐱;M)) for i = 1..=r.
pub fn koszul_lengths(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<Vec<Length>> {
    (1..=s.len()).map(|i| Ok(koszul_homology(ring, m, s, i)?.length(ring))).collect()
}

pub fn koszul_report(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<KoszulReport> {
    let r = s.len();
    let h0v = h0(ring, &quotient_by_ideal(ring, m, s.elems())?)?;
    let mut h = vec![Length::Finite(h0v)];
    h.extend(koszul_lengths(ring, m, s)?);
    let mut chi = Vec::with_capacity(r);
    for k in 1..=r {
        chi.push(if k == r { alternating(&h[1..]) } else { chi1(ring, m, s, k).ok() });
    }
    Ok(KoszulReport { h, chi1: chi })
}

fn alternating(ls: &[Length]) -> Option<i64> {
    let mut acc = 0i64;
    for (i, l) in ls.iter().enumerate() {
        let v = l.finite()? as i64;
        acc += if i % 2 == 0 { v } else { -v };
    }
    Some(acc)
}

/// χ₁(x₁..x_k;M) = Σ_{i≥1} (−1)^{i−1} λ(Hᵢ(x₁..x_k;M)).
pub fn chi1(ring: &Ring, m: &Module, s: &ParameterSequence, k: usize) -> Result<i64> {
    if k > s.len() {
        return Err(Error::IndexOutOfRange { index: k, max: s.len() });
    }
    if k == 0 {
        return Ok(0);
    }
    let ls = koszul_lengths(ring, m, &s.prefix(k))?;
    alternating(&ls).ok_or_else(|| Error::NotApplicable(String::from("Koszul homology of infinite length")))
}

/// dim M/(𝐱)M = dim M − r.
pub fn is_partial_sop(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<bool> {
    let d = m.dimension(ring);
    let q = quotient_by_ideal(ring, m, s.elems())?.dimension(ring);
    Ok(d >= 0 && q == d - s.len() as i32 || (d == -1 && s.is_empty()))
}

/// H₁(𝐱;M) of finite length; refuses sequences that are not partial sops.
pub fn is_amenable(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<bool> {
    if !is_partial_sop(ring, m, s)? {
        return Err(Error::NotApplicable(String::from("not a partial system of parameters")));
    }
    if s.is_empty() {
        return Ok(true);
    }
    Ok(koszul_homology(ring, m, s, 1)?.length(ring).is_finite())
}

/// First (i, j), 1 ≤ i ≤ j ≤ r, where I_{i−1}M : xᵢxⱼ ≠ I_{i−1}M : xⱼ.
pub fn d_sequence_failure(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<Option<(usize, usize)>> {
    let r = s.len();
    let ctx = ring.ctx();
    for i in 1..=r {
        let w = ideal_times(ring, m, s.prefix_ideal(i - 1))?;
        for j in i..=r {
            let xj = &s.elems()[j - 1];
            let prod = s.elems()[i - 1].mul(xj, ctx);
            let a = colon_elem(ring, m.num(), &prod, &w)?;
            let b = colon_elem(ring, m.num(), xj, &w)?;
            if a != b {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_d_sequence(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<bool> {
    Ok(d_sequence_failure(ring, m, s)?.is_none())
}

/// Outcome of a certification that can only be checked on a finite grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedVerdict {
    pub holds: bool,
    pub exp_bound: u32,
    /// Number of orderings examined (1 for strong d-sequences).
    pub orders_checked: usize,
    /// False when some orderings were skipped (r > 5 for d⁺).
    pub all_orders: bool,
    /// The failing exponent tuple and ordering, if any.
    pub witness: Option<(Vec<u32>, Vec<usize>)>,
}

fn grid(r: usize, b: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for t in &out {
            for e in 1..=b {
                let mut u = t.clone();
                u.push(e);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn strong_witness(ring: &Ring, m: &Module, s: &ParameterSequence, b: u32) -> Result<Option<Vec<u32>>> {
    for exps in grid(s.len(), b) {
        if !is_d_sequence(ring, m, &s.powers(ring, &exps))? {
            return Ok(Some(exps));
        }
    }
    Ok(None)
}

/// d-sequence property for every exponent tuple in [1, expBound]^r.
pub fn is_strong_d_sequence(ring: &Ring, m: &Module, s: &ParameterSequence, exp_bound: u32) -> Result<BoundedVerdict> {
    let w = strong_witness(ring, m, s, exp_bound)?;
    let id: Vec<usize> = (0..s.len()).collect();
    Ok(BoundedVerdict {
        holds: w.is_none(),
        exp_bound,
        orders_checked: 1,
        all_orders: true,
        witness: w.map(|e| (e, id)),
    })
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Strong d-sequence in every order (all permutations when r ≤ 5).
pub fn is_d_plus(ring: &Ring, m: &Module, s: &ParameterSequence, exp_bound: u32) -> Result<BoundedVerdict> {
    let r = s.len();
    let perms = if r <= 5 { permutations(r) } else { vec![(0..r).collect()] };
    let n = perms.len();
    for p in perms {
        if let Some(e) = strong_witness(ring, m, &s.permuted(&p), exp_bound)? {
            return Ok(BoundedVerdict {
                holds: false,
                exp_bound,
                orders_checked: n,
                all_orders: r <= 5,
                witness: Some((e, p)),
            });
        }
    }
    Ok(BoundedVerdict { holds: true, exp_bound, orders_checked: n, all_orders: r <= 5, witness: None })
}

/// Where x_k fails to kill Hⱼ(x₁..xᵢ;M): (i, j, index of a cycle generator).
pub fn annihilation_failure(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    i: usize,
    k: usize,
) -> Result<Option<(usize, usize, usize)>> {
    let pre = s.prefix(i);
    let xk = &s.elems()[k - 1];
    for j in 1..=i {
        let h = koszul_homology(ring, m, &pre, j)?;
        let ord = ring.order();
        for (g, z) in h.num().basis().iter().enumerate() {
            let v = z.mul_poly(xk, &ord, ring.field());
            if !h.den().contains(ring, &v)? {
                return Ok(Some((i, j, g)));
            }
        }
    }
    Ok(None)
}

/// x_{i+1}·Hⱼ(x₁..xᵢ;M) = 0 for 1 ≤ i < r, j > 0. Returns a witness on failure.
pub fn proper_sequence_failure(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
) -> Result<Option<(usize, usize, usize)>> {
    for i in 1..s.len() {
        if let Some(w) = annihilation_failure(ring, m, s, i, i + 1)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn is_proper_sequence(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<bool> {
    Ok(proper_sequence_failure(ring, m, s)?.is_none())
}

/// Random homogeneous element of the ideal with the given basis, of degree
/// max(deg basis).
fn random_element(ring: &Ring, basis: &[Poly], rng: &mut ChaCha8Rng) -> Poly {
    let ctx = ring.ctx();
    let f = ring.field();
    let p = f.characteristic();
    let top = basis.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
    let mut acc = Poly::zero();
    for g in basis {
        let mut c = Poly::constant(rng.random_range(1..p));
        for _ in g.degree().unwrap_or(0)..top {
            let mut l = Poly::zero();
            for v in 0..ring.nvars() {
                l = l.add(&Poly::var(v).scale(rng.random_range(0..p), ctx), ctx);
            }
            c = c.mul(&l, ctx);
        }
        acc = acc.add(&c.mul(g, ctx), ctx);
    }
    acc
}

const MAX_POWER: u32 = 6;

/// A system of parameters of M inside the ideal generated by `within`,
/// chosen along the lines of the classical construction (random elements of
/// I ∩ J₁ ∩ … ∩ J_s raised to a colon-stabilizing power) and then certified
/// to be a d-sequence.
pub fn construct_d_sequence_sop(ring: &Ring, m: &Module, within: &[Poly], seed: u64) -> Result<ParameterSequence> {
    let d = m.dimension(ring);
    if d <= 0 {
        return Err(Error::NotApplicable(format!("dim M = {d}")));
    }
    let ideal = Submodule::ideal(ring, within)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = ring.ctx();
    'attempt: for _ in 0..ring.caps.retries {
        let mut xs: Vec<Poly> = Vec::new();
        let mut pool = ideal.clone();
        for step in 0..d as usize {
            let y = random_element(ring, &pool.polys(ring), &mut rng);
            if y.is_zero() {
                continue 'attempt;
            }
            // smallest power with I_i M : y^m = I_i M : y^{m+1} for all i ≤ step
            let ws: Vec<Submodule> = (0..=step).map(|i| ideal_times(ring, m, &xs[..i])).collect::<Result<_>>()?;
            let mut power = None;
            let mut prev: Vec<Submodule> =
                ws.iter().map(|w| colon_elem(ring, m.num(), &y, w)).collect::<Result<_>>()?;
            for e in 1..=MAX_POWER {
                let ye = y.pow(e + 1, ctx);
                let next: Vec<Submodule> =
                    ws.iter().map(|w| colon_elem(ring, m.num(), &ye, w)).collect::<Result<_>>()?;
                if next == prev {
                    power = Some(e);
                    break;
                }
                prev = next;
            }
            let Some(e) = power else { continue 'attempt };
            let x = y.pow(e, ctx);
            xs.push(x.clone());
            let seq = ParameterSequence::new(ring, xs.clone())?;
            if !is_partial_sop(ring, m, &seq)? {
                continue 'attempt;
            }
            if step + 1 < d as usize {
                // J_{s+1} = I_s M :_R (I_s M :_M x_{s+1})
                let w = &ws[step];
                let c = colon_elem(ring, m.num(), &x, w)?;
                let j = annihilator(ring, &Module::from_parts(c, w.clone()))?;
                pool = intersect(ring, &pool, &j)?;
            }
        }
        let seq = ParameterSequence::new(ring, xs)?;
        if seq.len() == d as usize && is_d_sequence(ring, m, &seq)? {
            return Ok(seq);
        }
    }
    Err(Error::RetriesExhausted(ring.caps.retries))
}

/// I·W + U from W = IⁿV + U: the next stage of the I-adic filtration of M.
pub fn next_power(ring: &Ring, m: &Module, ideal: &[Poly], w: &Submodule) -> Result<Submodule> {
    m.den().add_gens(ring, &w.times_ideal(ring, ideal))
}
