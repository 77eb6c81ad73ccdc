//! Checks of the structure theorems for j-transforms: the Buchsbaum
//! decomposition at the level of Hilbert series, the sequentially
//! Cohen-Macaulay case through a user-supplied dimension filtration, good
//! systems of parameters, and the intersection identities behind them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jtransform::{JFiltration, RouteA};
use crate::koszul::{is_partial_sop, koszul_homology, next_power, ParameterSequence};
use crate::ops::{colon_elem, intersect};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::series::{binomial, GradedSeries};
use crate::submodule::{Module, Submodule};

/// Seeded random linear forms forming a system of parameters of M.
pub fn generic_sop(ring: &Ring, m: &Module, seed: u64) -> Result<ParameterSequence> {
    let d = m.dimension(ring).max(0) as usize;
    let p = ring.field().characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ring.caps.retries {
        let forms: Vec<Poly> = (0..d)
            .map(|_| {
                let mut f = Poly::zero();
                for v in 0..ring.nvars() {
                    f = f.add(&Poly::var(v).scale(rng.random_range(1..p), ring.ctx()), ring.ctx());
                }
                f
            })
            .collect();
        let s = ParameterSequence::new(ring, forms)?;
        if is_partial_sop(ring, m, &s)? {
            return Ok(s);
        }
    }
    Err(Error::RetriesExhausted(ring.caps.retries))
}

/// depth = dim, tested by H₁ of a generic sop.
pub fn is_cohen_macaulay(ring: &Ring, m: &Module, seed: u64) -> Result<bool> {
    if m.is_zero() || m.dimension(ring) == 0 {
        return Ok(true);
    }
    let s = generic_sop(ring, m, seed)?;
    Ok(koszul_homology(ring, m, &s, 1)?.is_zero())
}

/// 0 = D₀ ⊊ D₁ ⊊ … ⊊ D_ℓ = M, each Dᵢ lifted to a submodule of V containing U.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionFiltration {
    pub stages: Vec<Submodule>,
    pub dims: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationCheck {
    pub dims: Vec<i32>,
    pub increasing: bool,
    pub nested: bool,
    pub ends: bool,
    /// Cᵢ = Dᵢ/D_{i−1} Cohen-Macaulay, i = 1..ℓ.
    pub cm: Vec<bool>,
}

impl FiltrationCheck {
    pub fn valid(&self) -> bool {
        self.increasing && self.nested && self.ends && self.cm.iter().all(|&b| b)
    }
}

impl DimensionFiltration {
    /// `inner` lists D₁..D_{ℓ−1} by generators inside V; D₀ = 0 and D_ℓ = M
    /// are added.
    pub fn new(ring: &Ring, m: &Module, inner: &[Vec<crate::vector::FreeVector>]) -> Result<Self> {
        let mut stages = vec![m.den().clone()];
        for gens in inner {
            stages.push(m.den().add_gens(ring, gens)?);
        }
        stages.push(m.num().clone());
        let dims = stages[1..].iter().map(|d| Module::from_parts(d.clone(), m.den().clone()).dimension(ring)).collect();
        Ok(DimensionFiltration { stages, dims })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Cᵢ = Dᵢ/D_{i−1}, 1 ≤ i ≤ ℓ.
    pub fn quotient(&self, i: usize) -> Module {
        Module::from_parts(self.stages[i].clone(), self.stages[i - 1].clone())
    }

    /// Dᵢ as a module.
    pub fn stage(&self, i: usize) -> Module {
        Module::from_parts(self.stages[i].clone(), self.stages[0].clone())
    }

    pub fn verify(&self, ring: &Ring, m: &Module, seed: u64) -> Result<FiltrationCheck> {
        let increasing = self.dims.windows(2).all(|w| w[0] < w[1]) && self.dims.first().is_some_and(|&d| d >= 0);
        let mut nested = true;
        for w in self.stages.windows(2) {
            nested &= w[1].contains_all(ring, &w[0])? && w[0] != w[1];
        }
        let ends = self.stages.last() == Some(m.num()) && self.dims.last() == Some(&m.dimension(ring));
        let mut cm = Vec::new();
        for i in 1..self.stages.len() {
            cm.push(is_cohen_macaulay(ring, &self.quotient(i), seed.wrapping_add(i as u64))?);
        }
        Ok(FiltrationCheck { dims: self.dims.clone(), increasing, nested, ends, cm })
    }
}

/// [[Zᵢ(i)]] for Zᵢ the i-th syzygy of k over a polynomial ring in r
/// variables, from its Koszul resolution.
pub fn syzygy_series(r: usize, i: usize) -> GradedSeries {
    if i > r {
        return GradedSeries::zero();
    }
    let num: Vec<i64> =
        (i..=r).map(|j| binomial(r as i64, j as i64) * if (j - i).is_multiple_of(2) { 1 } else { -1 }).collect();
    GradedSeries::new(num, 0, r as u32)
}

/// Σᵢ hⁱ·[[Zᵢ(i)]] for i = 0..=r.
pub fn buchsbaum_series(h: &[u64], r: usize) -> GradedSeries {
    let mut acc = GradedSeries::zero();
    for (i, &v) in h.iter().enumerate().take(r + 1) {
        acc = acc.add(&syzygy_series(r, i).scale(v as i64));
    }
    acc
}

pub fn buchsbaum_series_check(a: &RouteA, h: &[u64], r: usize) -> bool {
    a.series == buchsbaum_series(h, r)
}

/// dim H = 0 when h¹ = … = h^r = 0 and r otherwise, for H ≠ 0.
pub fn dim_h_dichotomy(a: &RouteA, h: &[u64], r: usize) -> Result<bool> {
    if a.dim_h == -1 {
        return Err(Error::NotApplicable(String::from("H = 0")));
    }
    let quiet = (1..=r).all(|i| h.get(i).copied().unwrap_or(0) == 0);
    Ok(a.dim_h == if quiet { 0 } else { r as i32 })
}

/// First (i, j) with x_j·Dᵢ ≠ 0 although j > dᵢ (1-based j).
pub fn good_sop_failure(
    ring: &Ring,
    filt: &DimensionFiltration,
    q: &ParameterSequence,
) -> Result<Option<(usize, usize)>> {
    let ord = ring.order();
    for i in 1..filt.stages.len() {
        let di = filt.dims[i - 1].max(0) as usize;
        for j in di + 1..=q.len() {
            let x = &q.elems()[j - 1];
            for g in filt.stages[i].basis() {
                if !filt.stages[0].contains(ring, &g.mul_poly(x, &ord, ring.field()))? {
                    return Ok(Some((i, j)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_good_sop(ring: &Ring, filt: &DimensionFiltration, q: &ParameterSequence) -> Result<bool> {
    Ok(good_sop_failure(ring, filt, q)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqCmCheck {
    /// max{i : dᵢ ≤ r}.
    pub q_index: usize,
    /// Σ_{i ≤ q} λ(Cᵢ/𝔮Cᵢ)·C(n+dᵢ, dᵢ) for n = 0..=cap.
    pub predicted: Vec<u64>,
    pub psi_matches: bool,
    pub dim_matches: bool,
    /// IⁿM ∩ Dᵢ = IⁿDᵢ for n ≤ cap and every i.
    pub intersections: bool,
    /// H⁰_𝔪(G(Cᵢ)) is all of G(Cᵢ) or zero according to dᵢ ≤ r, n ≤ cap.
    pub graded_pieces: bool,
}

impl SeqCmCheck {
    pub fn holds(&self) -> bool {
        self.psi_matches && self.dim_matches && self.intersections && self.graded_pieces
    }
}

/// The sequentially Cohen-Macaulay description of H for s = first r
/// elements of the good sop `full`.
pub fn seq_cm_j_transform(
    ring: &Ring,
    m: &Module,
    filt: &DimensionFiltration,
    full: &ParameterSequence,
    r: usize,
    a: &RouteA,
    cap: usize,
) -> Result<SeqCmCheck> {
    let s = full.prefix(r);
    let q_index = filt.dims.iter().take_while(|&&d| d <= r as i32).count();
    let mut colengths = Vec::new();
    for i in 1..=q_index {
        let c = filt.quotient(i);
        let cq = crate::koszul::quotient_by_ideal(ring, &c, full.elems())?;
        colengths.push(cq.length(ring).finite().ok_or(Error::NotApplicable(String::from("not a full sop")))?);
    }
    let predicted: Vec<u64> = (0..=cap)
        .map(|n| {
            (0..q_index)
                .map(|i| colengths[i] * binomial(n as i64 + filt.dims[i] as i64, filt.dims[i] as i64) as u64)
                .sum()
        })
        .collect();
    let psi_matches = (0..=cap).all(|n| a.psi.get(n).is_none_or(|&v| v == predicted[n]));
    let expected_dim = if q_index == 0 { -1 } else { filt.dims[q_index - 1] };
    let dim_matches = a.dim_h == expected_dim;

    let mut intersections = true;
    for i in 1..filt.stages.len() {
        let mut w = m.num().clone();
        let mut wd = filt.stages[i].clone();
        for _ in 0..=cap {
            intersections &= intersect(ring, &w, &filt.stages[i])? == wd;
            w = next_power(ring, m, s.elems(), &w)?;
            wd = next_power(ring, m, s.elems(), &wd)?;
        }
    }

    let mut graded_pieces = true;
    for i in 1..filt.stages.len() {
        let c = filt.quotient(i);
        let mut f = JFiltration::new(&c);
        f.extend_to(ring, &c, &s, cap)?;
        for n in 0..=cap {
            let whole = Module::from_parts(f.stages[n].clone(), f.stages[n + 1].clone()).length(ring);
            let tors = f.pieces[n].length(ring);
            let ok = if filt.dims[i - 1] <= r as i32 { tors == whole } else { tors.finite() == Some(0) };
            graded_pieces &= ok;
        }
    }
    Ok(SeqCmCheck { q_index, predicted, psi_matches, dim_matches, intersections, graded_pieces })
}

/// (f₁..fᵢ)G(M) ∩ H = (f₁..fᵢ)H in degrees ≤ cap.
pub fn intersection_identity(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    i: usize,
    filt: &mut JFiltration,
    cap: usize,
) -> Result<bool> {
    filt.extend_to(ring, m, s, cap)?;
    let fi = s.prefix_ideal(i);
    for n in 1..=cap {
        let next = &filt.stages[n + 1];
        let fg = next.add_gens(ring, &filt.stages[n - 1].times_ideal(ring, fi))?;
        let lhs = intersect(ring, &fg, filt.pieces[n].num())?;
        let rhs = next.add_gens(ring, &filt.pieces[n - 1].num().times_ideal(ring, fi))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// f₁..f_r regular on G(M)/H, checked on pieces of degree < cap.
pub fn regular_on_quotient(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    filt: &mut JFiltration,
    cap: usize,
) -> Result<bool> {
    filt.extend_to(ring, m, s, cap)?;
    for i in 1..=s.len() {
        let prev = s.prefix_ideal(i - 1);
        // Bₙ = Hₙ-lift + I_{i−1}U_{n−1}
        let b = |n: usize| -> Result<Submodule> {
            let base = filt.pieces[n].num().clone();
            if n == 0 || prev.is_empty() {
                Ok(base)
            } else {
                base.add_gens(ring, &filt.stages[n - 1].times_ideal(ring, prev))
            }
        };
        for n in 0..cap {
            let c = colon_elem(ring, &filt.stages[n], &s.elems()[i - 1], &b(n + 1)?)?;
            if !b(n)?.contains_all(ring, &c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
