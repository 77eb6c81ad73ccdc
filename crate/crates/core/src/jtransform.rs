//! The j-transform H = H⁰_𝔪(gr_I(M)) for I generated by a partial system of
//! parameters, its Hilbert function ψ(n) = Σ_{k≤n} λ(H_k), and the
//! j-coefficients, computed three ways:
//!
//! * route A works for any sequence, saturating each piece IⁿM/I^{n+1}M;
//! * route B reads them off Koszul homology lengths;
//! * route C uses h⁰(M/IₖM) for the prefix ideals.
//!
//! B and C require an amenable d-sequence.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::koszul::{
    chi1, is_amenable, is_d_sequence, is_partial_sop, koszul_homology, koszul_report, next_power, quotient_by_ideal,
    ParameterSequence,
};
use crate::localcohom::{differences, LocalCohomology, Unmixedness};
use crate::ops::{h0, h0_module};
use crate::ring::Ring;
use crate::series::{binomial, GradedSeries};
use crate::submodule::{Module, Submodule};

/// IⁿM/I^{n+1}M.
pub fn gr_piece(ring: &Ring, m: &Module, s: &ParameterSequence, n: u32) -> Result<Module> {
    let mut w = m.num().clone();
    for _ in 0..n {
        w = next_power(ring, m, s.elems(), &w)?;
    }
    let next = next_power(ring, m, s.elems(), &w)?;
    Ok(Module::from_parts(w, next))
}

/// The computed part of the I-adic filtration and of H.
#[derive(Clone, Debug)]
pub struct JFiltration {
    /// Uₙ = IⁿV + U for n = 0..=N+1.
    pub stages: Vec<Submodule>,
    /// [H]ₙ = (Sat(U_{n+1}) ∩ Uₙ)/U_{n+1} for n = 0..=N.
    pub pieces: Vec<Module>,
}

impl JFiltration {
    pub fn new(m: &Module) -> Self {
        JFiltration { stages: vec![m.num().clone()], pieces: Vec::new() }
    }

    /// Extends the computation through degree n.
    pub fn extend_to(&mut self, ring: &Ring, m: &Module, s: &ParameterSequence, n: usize) -> Result<()> {
        while self.pieces.len() <= n {
            let k = self.pieces.len();
            if self.stages.len() <= k + 1 {
                let next = next_power(ring, m, s.elems(), &self.stages[k])?;
                self.stages.push(next);
            }
            let piece = Module::from_parts(self.stages[k].clone(), self.stages[k + 1].clone());
            self.pieces.push(h0_module(ring, &piece)?);
        }
        Ok(())
    }

    pub fn lambda(&self, ring: &Ring, n: usize) -> Result<u64> {
        self.pieces[n]
            .length(ring)
            .finite()
            .ok_or_else(|| Error::CapExceeded(String::from("torsion piece of infinite length")))
    }
}

/// Route A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteA {
    /// λ([H]ₙ) for n = 0..=N.
    pub lambda: Vec<u64>,
    /// ψ(n) for n = 0..=N.
    pub psi: Vec<u64>,
    /// First n₀ beyond which ψ agrees with a polynomial.
    pub stabilization: usize,
    pub j: Vec<i64>,
    /// kᵢ = (−1)ⁱjᵢ.
    pub k: Vec<i64>,
    pub series: GradedSeries,
    /// Degree of the ψ polynomial; −1 when H = 0.
    pub dim_h: i32,
}

/// Number of vanishing (r+1)-st differences required before ψ is accepted
/// as polynomial.
pub const CONFIRM_WINDOW: usize = 5;

/// ψ computed directly through at least degree `n_min` and until it is
/// confirmed polynomial.
pub fn j_function_direct(ring: &Ring, m: &Module, s: &ParameterSequence, n_min: usize) -> Result<RouteA> {
    let mut filt = JFiltration::new(m);
    j_function_with(ring, m, s, n_min, &mut filt)
}

pub fn j_function_with(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    n_min: usize,
    filt: &mut JFiltration,
) -> Result<RouteA> {
    let r = s.len();
    let cap = (ring.caps.psi_max as usize).max(n_min);
    let mut lambda: Vec<u64> = Vec::new();
    let mut psi: Vec<u64> = Vec::new();
    for n in 0..=cap {
        filt.extend_to(ring, m, s, n)?;
        let l = filt.lambda(ring, n)?;
        lambda.push(l);
        psi.push(psi.last().copied().unwrap_or(0) + l);
        if n < n_min {
            continue;
        }
        let vals: Vec<i64> = psi.iter().map(|&v| v as i64).collect();
        let d = differences(&vals, r + 1);
        let run = d.iter().rev().take_while(|&&v| v == 0).count();
        if run >= CONFIRM_WINDOW {
            let start = d.len() - run;
            return Ok(finish_route_a(lambda, psi, start, r));
        }
    }
    Err(Error::CapExceeded(format!("ψ not polynomial by degree {cap}")))
}

fn finish_route_a(lambda: Vec<u64>, psi: Vec<u64>, start: usize, r: usize) -> RouteA {
    let k = coefficients_from_values(&psi[start..=start + r], start as i64, r);
    let j: Vec<i64> = k.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { -c }).collect();
    // Σ λₙtⁿ·(1−t)^r is a polynomial of degree ≤ n₀ + r
    let mut num = vec![0i64; start + r + 1];
    for (e, slot) in num.iter_mut().enumerate() {
        for t in 0..=r.min(e) {
            let c = binomial(r as i64, t as i64) * if t % 2 == 0 { 1 } else { -1 };
            if let Some(&l) = lambda.get(e - t) {
                *slot += c * l as i64;
            }
        }
    }
    let series = GradedSeries::new(num, 0, r as u32);
    let dim_h = series.dimension();
    RouteA { lambda, psi, stabilization: start, j, k, series, dim_h }
}

/// Coefficients cᵢ of P(n) = Σᵢ cᵢ·C(n+r−i, r−i) from P at n₀..n₀+r.
pub fn coefficients_from_values(vals: &[u64], n0: i64, r: usize) -> Vec<i64> {
    let mut cur: Vec<i64> = vals.iter().map(|&v| v as i64).collect();
    let mut out = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let c = differences(&cur, r - i)[0];
        out.push(c);
        for (t, v) in cur.iter_mut().enumerate() {
            let n = n0 + t as i64;
            *v -= c * binomial(n + (r - i) as i64, (r - i) as i64);
        }
    }
    out
}

/// Σ kᵢ(1−t)ⁱ/(1−t)^r, the series of H when ψ = Σ kᵢ C(n+r−i, r−i).
pub fn series_from_k(k: &[i64]) -> GradedSeries {
    let r = k.len() - 1;
    let mut num = vec![0i64; r + 1];
    for (i, &ki) in k.iter().enumerate() {
        for t in 0..=i {
            num[t] += ki * binomial(i as i64, t as i64) * if t % 2 == 0 { 1 } else { -1 };
        }
    }
    GradedSeries::new(num, 0, r as u32)
}

fn require_amenable_d_sequence(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<()> {
    let ok = is_partial_sop(ring, m, s)? && is_amenable(ring, m, s)? && is_d_sequence(ring, m, s)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotApplicable(String::from("sequence is not an amenable d-sequence")))
    }
}

/// Route B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteB {
    /// h₀ = h⁰(M/IM), hᵢ = λ(Hᵢ(𝐱;M)).
    pub h: Vec<u64>,
    pub j: Vec<i64>,
    pub series: GradedSeries,
}

pub fn j_coeffs_from_h(h: &[u64]) -> Vec<i64> {
    let r = h.len() - 1;
    (0..=r)
        .map(|i| {
            (i..=r)
                .map(|k| {
                    let t = h[k] as i64 * binomial(k as i64, i as i64);
                    if k % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect()
}

pub fn j_coeffs_koszul(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<RouteB> {
    require_amenable_d_sequence(ring, m, s)?;
    let rep = koszul_report(ring, m, s)?;
    let h = rep.values().ok_or_else(|| Error::NotApplicable(String::from("infinite Koszul homology")))?;
    let r = s.len();
    let num: Vec<i64> = h.iter().enumerate().map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) }).collect();
    Ok(RouteB { j: j_coeffs_from_h(&h), series: GradedSeries::new(num, 0, r as u32), h })
}

/// Route C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteC {
    /// h⁰(M/IₖM) for k = 0..=r.
    pub h0: Vec<u64>,
    pub k: Vec<i64>,
    pub j: Vec<i64>,
    pub series: GradedSeries,
}

/// h⁰(M/IₖM) for k = 0..=r.
pub fn prefix_h0(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<Vec<u64>> {
    (0..=s.len()).map(|k| h0(ring, &quotient_by_ideal(ring, m, s.prefix_ideal(k))?)).collect()
}

pub fn k_from_prefix_h0(h0s: &[u64]) -> Vec<i64> {
    let r = h0s.len() - 1;
    (0..=r).map(|i| if i == r { h0s[0] as i64 } else { h0s[r - i] as i64 - h0s[r - i - 1] as i64 }).collect()
}

pub fn j_coeffs_local(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<RouteC> {
    require_amenable_d_sequence(ring, m, s)?;
    let h0s = prefix_h0(ring, m, s)?;
    let k = k_from_prefix_h0(&h0s);
    let j = k.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { -c }).collect();
    Ok(RouteC { series: series_from_k(&k), h0: h0s, k, j })
}

/// λ(Hᵢ) = Σ_{j=i}^r h⁰(M/I_{r−j}M)·C(j−1, i−1) for i = 1..r, from
/// independently computed sides.
pub fn length_identity_holds(h: &[u64], h0s: &[u64]) -> bool {
    let r = h.len() - 1;
    (1..=r).all(|i| {
        let rhs: i64 = (i..=r).map(|j| h0s[r - j] as i64 * binomial(j as i64 - 1, i as i64 - 1)).sum();
        h[i] as i64 == rhs
    })
}

pub fn koszul_length_identity(ring: &Ring, m: &Module, s: &ParameterSequence) -> Result<bool> {
    require_amenable_d_sequence(ring, m, s)?;
    let lens: Vec<u64> = (1..=s.len())
        .map(|i| {
            koszul_homology(ring, m, s, i)?
                .length(ring)
                .finite()
                .ok_or(Error::NotApplicable(String::from("infinite Koszul homology")))
        })
        .collect::<Result<_>>()?;
    let mut h = vec![0];
    h.extend(lens);
    Ok(length_identity_holds(&h, &prefix_h0(ring, m, s)?))
}

/// (−1)ⁱjᵢ against χ₁ of consecutive prefixes. χ₁ of the empty prefix is 0,
/// and the index r+1 at i = 0 reads as h⁰(M/IM) (the value χ₁ of a prefix of
/// length k takes, h⁰(M/I_{k−1}M)).
pub fn chi1_differences(ring: &Ring, m: &Module, s: &ParameterSequence, j: &[i64]) -> Result<bool> {
    let r = s.len();
    let mut chis = vec![0i64];
    for k in 1..=r {
        chis.push(chi1(ring, m, s, k)?);
    }
    chis.push(h0(ring, &quotient_by_ideal(ring, m, s.elems())?)? as i64);
    Ok((0..=r).all(|i| {
        let lhs = if i % 2 == 0 { j[i] } else { -j[i] };
        lhs == chis[r + 1 - i] - chis[r - i]
    }))
}

/// χ₁(𝐱;M) ≥ −j₁, with equality iff x₁..x_{r−1} is M-regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerBound {
    pub chi1: i64,
    pub minus_j1: i64,
    pub prefix_regular: bool,
    pub holds: bool,
}

pub fn euler_bound(ring: &Ring, m: &Module, s: &ParameterSequence, j1: i64) -> Result<EulerBound> {
    let r = s.len();
    if r < 2 {
        return Err(Error::NotApplicable(String::from("needs r ≥ 2")));
    }
    let c = chi1(ring, m, s, r)?;
    let prefix_regular = koszul_homology(ring, m, &s.prefix(r - 1), 1)?.is_zero();
    let holds = c >= -j1 && ((c == -j1) == prefix_regular);
    Ok(EulerBound { chi1: c, minus_j1: -j1, prefix_regular, holds })
}

/// [H]ₙ ⊆ Iⁿ[H]₀ + U_{n+1} for n ≤ `upto`.
pub fn generated_in_degree_zero(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    filt: &mut JFiltration,
    upto: usize,
) -> Result<bool> {
    filt.extend_to(ring, m, s, upto)?;
    let mut t = filt.pieces[0].num().clone();
    for n in 0..=upto {
        if !t.contains_all(ring, filt.pieces[n].num())? {
            return Ok(false);
        }
        if n < upto {
            t = filt.stages[n + 2].add_gens(ring, &t.times_ideal(ring, s.elems()))?;
        }
    }
    Ok(true)
}

/// All three routes on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JReport {
    pub route_a: RouteA,
    pub route_b: Option<RouteB>,
    pub route_c: Option<RouteC>,
    /// Why B and C were skipped.
    pub skipped: Option<String>,
    /// All applicable routes give identical j and series.
    pub routes_agree: bool,
    pub regular: bool,
}

pub fn j_report(ring: &Ring, m: &Module, s: &ParameterSequence, n_min: usize) -> Result<JReport> {
    let route_a = j_function_direct(ring, m, s, n_min)?;
    let (route_b, route_c, skipped) = match require_amenable_d_sequence(ring, m, s) {
        Ok(()) => (Some(j_coeffs_koszul(ring, m, s)?), Some(j_coeffs_local(ring, m, s)?), None),
        Err(Error::NotApplicable(why)) => (None, None, Some(why)),
        Err(e) => return Err(e),
    };
    let mut agree = true;
    if let Some(b) = &route_b {
        agree &= b.j == route_a.j && b.series == route_a.series;
    }
    if let Some(c) = &route_c {
        agree &= c.j == route_a.j && c.series == route_a.series;
    }
    let regular = s.is_empty() || koszul_homology(ring, m, s, 1)?.is_zero();
    Ok(JReport { route_a, route_b, route_c, skipped, routes_agree: agree, regular })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Supporting,
    CounterexampleCandidate,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Supporting => "SUPPORTING",
            Verdict::CounterexampleCandidate => "COUNTEREXAMPLE-CANDIDATE",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixedStatus {
    Asserted,
    Verified,
    Mixed(Vec<u32>),
    Unknown,
}

impl MixedStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            MixedStatus::Asserted => "user-asserted",
            MixedStatus::Verified => "verified",
            MixedStatus::Mixed(_) => "mixed",
            MixedStatus::Unknown => "unknown",
        }
    }
}

/// Hypotheses and conclusion of the regularity conjecture on one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRecord {
    pub verdict: Verdict,
    pub partial_sop: bool,
    pub amenable: Option<bool>,
    pub d_sequence: Option<bool>,
    pub dim_h: Option<i32>,
    pub j1: Option<i64>,
    pub unmixed: MixedStatus,
    pub regular: Option<bool>,
    pub note: Option<String>,
}

/// Never fails: computational trouble becomes NOT_APPLICABLE with a note.
pub fn conjecture_probe(ring: &Ring, m: &Module, s: &ParameterSequence, assert_unmixed: bool) -> ProbeRecord {
    let mut rec = ProbeRecord {
        verdict: Verdict::NotApplicable,
        partial_sop: false,
        amenable: None,
        d_sequence: None,
        dim_h: None,
        j1: None,
        unmixed: if assert_unmixed { MixedStatus::Asserted } else { MixedStatus::Unknown },
        regular: None,
        note: None,
    };
    if let Err(e) = probe_inner(ring, m, s, &mut rec) {
        rec.verdict = Verdict::NotApplicable;
        rec.note = Some(e.to_string());
    }
    rec
}

fn probe_inner(ring: &Ring, m: &Module, s: &ParameterSequence, rec: &mut ProbeRecord) -> Result<()> {
    rec.partial_sop = is_partial_sop(ring, m, s)?;
    if !rec.partial_sop {
        rec.note = Some(String::from("not a partial system of parameters"));
        return Ok(());
    }
    let regular = s.is_empty() || koszul_homology(ring, m, s, 1)?.is_zero();
    rec.regular = Some(regular);
    rec.amenable = Some(is_amenable(ring, m, s)?);
    rec.d_sequence = Some(is_d_sequence(ring, m, s)?);
    if regular {
        rec.verdict = Verdict::Supporting;
        return Ok(());
    }
    if rec.amenable != Some(true) || rec.d_sequence != Some(true) {
        rec.note = Some(String::from("not an amenable d-sequence"));
        return Ok(());
    }
    // route C is valid here and cheaper than ψ
    let c = j_coeffs_local(ring, m, s)?;
    let j1 = c.j.get(1).copied().unwrap_or(0);
    rec.j1 = Some(j1);
    if j1 != 0 {
        rec.note = Some(String::from("j₁ ≠ 0"));
        return Ok(());
    }
    let a = j_function_direct(ring, m, s, 0)?;
    rec.dim_h = Some(a.dim_h);
    if a.dim_h != s.len() as i32 {
        rec.note = Some(String::from("dim H < r"));
        return Ok(());
    }
    if rec.unmixed != MixedStatus::Asserted {
        rec.unmixed = match LocalCohomology::new(ring, m).map(|lc| lc.unmixedness(ring)) {
            Ok(Unmixedness::Unmixed) => MixedStatus::Verified,
            Ok(Unmixedness::Mixed { lower_dimensions }) => MixedStatus::Mixed(lower_dimensions),
            Err(_) => MixedStatus::Unknown,
        };
    }
    if let MixedStatus::Mixed(_) = rec.unmixed {
        rec.note = Some(String::from("module is mixed"));
        return Ok(());
    }
    rec.verdict = Verdict::CounterexampleCandidate;
    Ok(())
}

/// H = 0 ⇔ h⁰(M/IM) = 0 ⇔ depth M ≥ r+1, the last read from Koszul homology
/// and h⁰(M/IM).
pub fn vanishing_consistent(ring: &Ring, m: &Module, s: &ParameterSequence, a: &RouteA) -> Result<bool> {
    let h0q = h0(ring, &quotient_by_ideal(ring, m, s.elems())?)?;
    let regular = s.is_empty() || koszul_homology(ring, m, s, 1)?.is_zero();
    let depth_big = regular && h0q == 0;
    let zero = a.dim_h == -1;
    Ok(zero == (h0q == 0) && zero == depth_big)
}

/// IⁿM ∩ (I^{n+1}M :_M 𝔪^∞) = Iⁿ(IM :_M 𝔪^∞) for n ≤ `upto`, as submodules of V.
pub fn saturation_intersection_identity(
    ring: &Ring,
    m: &Module,
    s: &ParameterSequence,
    filt: &mut JFiltration,
    upto: usize,
) -> Result<bool> {
    filt.extend_to(ring, m, s, upto)?;
    let mut t = filt.pieces[0].num().clone();
    for n in 0..=upto {
        if filt.pieces[n].num() != &t {
            return Ok(false);
        }
        if n < upto {
            t = next_power(ring, m, s.elems(), &t)?;
        }
    }
    Ok(true)
}
