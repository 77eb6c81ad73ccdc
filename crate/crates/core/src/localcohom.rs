//! Graded local cohomology lengths through local duality over S:
//! H^i_𝔪(M) is Matlis dual to Ext_S^{n−i}(M, S(−n)), so hⁱ(M) is the length
//! of that Ext module, read off a minimal free resolution.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::koszul::{next_power, ParameterSequence};
use crate::ops::{annihilator, colon_elem, h0_module, kernel, syzygies};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::series::{binomial, Length};
use crate::submodule::{Module, Submodule};
use crate::vector::FreeVector;

/// F₀ ← F₁ ← … ← F_ℓ. `maps[j][k]` is the image in F_j of the k-th basis
/// element of F_{j+1}; `shifts[j]` are the generator degrees of F_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub shifts: Vec<Vec<i32>>,
    pub maps: Vec<Vec<FreeVector>>,
}

impl Resolution {
    pub fn betti(&self) -> Vec<usize> {
        self.shifts.iter().map(|s| s.len()).collect()
    }

    /// Projective dimension (0 for a free module).
    pub fn length(&self) -> usize {
        self.shifts.len().saturating_sub(1)
    }
}

/// M ≅ F₀/K with F₀ on a minimal generating set of M.
pub fn presentation(ring: &Ring, m: &Module) -> Result<(Vec<i32>, Submodule)> {
    let gens = m.min_generators(ring)?;
    let shifts: Vec<i32> = gens.iter().map(|g| g.degree().unwrap()).collect();
    let k = kernel(ring, &shifts, &gens, m.shifts(), m.den().basis())?;
    Ok((shifts, k))
}

/// Minimal graded free resolution of M over S by iterated syzygies.
pub fn free_resolution(ring: &Ring, m: &Module, max_step: usize) -> Result<Resolution> {
    let (f0, mut k) = presentation(ring, m)?;
    let mut shifts = vec![f0];
    let mut maps = Vec::new();
    while !k.is_zero() {
        if maps.len() >= max_step {
            return Err(Error::CapExceeded(format!("resolution longer than {max_step}")));
        }
        let gens = Module::from_parts(k.clone(), Submodule::zero(k.shifts())).min_generators(ring)?;
        let (src, next) = syzygies(ring, k.shifts(), &gens)?;
        shifts.push(src);
        maps.push(gens);
        k = next;
    }
    Ok(Resolution { shifts, maps })
}

/// e_l^* ↦ Σ_k a_{lk} e_k^* for the map F_{j+1} → F_j given by `cols`.
fn transpose(ring: &Ring, cols: &[FreeVector], src: &[i32], tgt: &[i32]) -> Vec<FreeVector> {
    let ctx = ring.ctx();
    let dual_tgt: Vec<i32> = tgt.iter().map(|s| -s).collect();
    (0..src.len())
        .map(|l| {
            let comps: Vec<Poly> = cols.iter().map(|c| c.component(l, ctx)).collect();
            FreeVector::from_components(&comps, &dual_tgt, ctx.order, ring.field())
        })
        .collect()
}

/// Ext_S^j(M, S) as a subquotient of F_j^*, from a resolution.
pub fn ext(ring: &Ring, res: &Resolution, j: usize) -> Result<Module> {
    if j >= res.shifts.len() {
        return Ok(Module::from_parts(Submodule::zero(&[0]), Submodule::zero(&[0])));
    }
    let dual: Vec<i32> = res.shifts[j].iter().map(|s| -s).collect();
    let ker = if j < res.maps.len() {
        let images = transpose(ring, &res.maps[j], &res.shifts[j], &res.shifts[j + 1]);
        let tgt: Vec<i32> = res.shifts[j + 1].iter().map(|s| -s).collect();
        kernel(ring, &dual, &images, &tgt, &[])?
    } else {
        Submodule::free(&dual)
    };
    let im = if j > 0 {
        let prev: Vec<i32> = res.shifts[j - 1].clone();
        Submodule::new(ring, &dual, &transpose(ring, &res.maps[j - 1], &prev, &res.shifts[j]))?
    } else {
        Submodule::zero(&dual)
    };
    Ok(Module::from_parts(ker, im))
}

/// Ext modules of M, with hⁱ(M) = λ(Ext^{n−i}).
#[derive(Clone, Debug)]
pub struct LocalCohomology {
    pub resolution: Resolution,
    exts: Vec<Module>,
    nvars: usize,
    dim: i32,
}

impl LocalCohomology {
    pub fn new(ring: &Ring, m: &Module) -> Result<Self> {
        let n = ring.nvars();
        let resolution = free_resolution(ring, m, n + 1)?;
        let exts = (0..=n).map(|j| ext(ring, &resolution, j)).collect::<Result<_>>()?;
        Ok(LocalCohomology { resolution, exts, nvars: n, dim: m.dimension(ring) })
    }

    pub fn dimension(&self) -> i32 {
        self.dim
    }

    /// Ext_S^{n−i}(M,S), the Matlis dual of H^i_𝔪(M) up to a twist.
    pub fn dual(&self, i: usize) -> Option<&Module> {
        (i <= self.nvars).then(|| &self.exts[self.nvars - i])
    }

    pub fn h(&self, ring: &Ring, i: usize) -> Length {
        match self.dual(i) {
            Some(e) => e.length(ring),
            None => Length::Finite(0),
        }
    }

    /// h⁰..h^{d−1}.
    pub fn below_dim(&self, ring: &Ring) -> Vec<Length> {
        (0..self.dim.max(0) as usize).map(|i| self.h(ring, i)).collect()
    }

    /// Finite values h⁰..h^{d−1}, if M has finite local cohomology.
    pub fn finite_values(&self, ring: &Ring) -> Option<Vec<u64>> {
        self.below_dim(ring).into_iter().map(|l| l.finite()).collect()
    }

    pub fn is_flc(&self, ring: &Ring) -> bool {
        self.finite_values(ring).is_some()
    }

    /// 𝔪·Hⁱ = 0 for all i < d; `None` without FLC.
    pub fn is_quasi_buchsbaum(&self, ring: &Ring) -> Result<Option<bool>> {
        if !self.is_flc(ring) {
            return Ok(None);
        }
        let ord = ring.order();
        for i in 0..self.dim.max(0) as usize {
            let e = self.dual(i).unwrap();
            for v in 0..ring.nvars() {
                let x = Poly::var(v);
                for g in e.num().basis() {
                    if !e.den().contains(ring, &g.mul_poly(&x, &ord, ring.field()))? {
                        return Ok(Some(false));
                    }
                }
            }
        }
        Ok(Some(true))
    }

    /// ann Hⁱ_𝔪(M) as an ideal of S.
    pub fn annihilator(&self, ring: &Ring, i: usize) -> Result<Submodule> {
        match self.dual(i) {
            Some(e) => annihilator(ring, e),
            None => Ok(Submodule::free(&[0])),
        }
    }

    /// Σ_{i<d} C(d−1, i)·hⁱ(M) when finite.
    pub fn sv_invariant(&self, ring: &Ring) -> Option<u64> {
        let h = self.finite_values(ring)?;
        let d = self.dim as i64;
        Some(h.iter().enumerate().map(|(i, &v)| binomial(d - 1, i as i64) as u64 * v).sum())
    }

    /// Mixedness from Ext: M has an associated prime of dimension i exactly
    /// when dim Ext^{n−i}(M,S) = i.
    pub fn unmixedness(&self, ring: &Ring) -> Unmixedness {
        let mut lower = Vec::new();
        for i in 0..self.dim.max(0) as usize {
            if self.dual(i).is_some_and(|e| e.dimension(ring) == i as i32) {
                lower.push(i as u32);
            }
        }
        if lower.is_empty() {
            Unmixedness::Unmixed
        } else {
            Unmixedness::Mixed { lower_dimensions: lower }
        }
    }

    pub fn report(&self, ring: &Ring) -> Result<LocalCohomReport> {
        let h = self.below_dim(ring);
        Ok(LocalCohomReport {
            flc: h.iter().all(|l| l.is_finite()),
            quasi_buchsbaum: self.is_quasi_buchsbaum(ring)?,
            sv_invariant: self.sv_invariant(ring),
            dim: self.dim,
            h,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unmixedness {
    Unmixed,
    /// Dimensions of associated primes below dim M.
    Mixed {
        lower_dimensions: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCohomReport {
    pub dim: i32,
    /// h⁰..h^{d−1}.
    pub h: Vec<Length>,
    pub flc: bool,
    pub quasi_buchsbaum: Option<bool>,
    pub sv_invariant: Option<u64>,
}

pub fn h_local(ring: &Ring, m: &Module, i: usize) -> Result<Length> {
    Ok(LocalCohomology::new(ring, m)?.h(ring, i))
}

/// Outcome of the long exact sequence check for x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesCheck {
    pub holds: bool,
    /// Indices i where hⁱ(M/xM) and the right side were both finite.
    pub checked: Vec<usize>,
    /// hⁱ(M/xM) for i ≤ d.
    pub quotient_h: Vec<Length>,
}

fn length_of(ring: &Ring, num: Submodule, den: Submodule) -> Length {
    Module::from_parts(num, den).length(ring)
}

/// Compares hⁱ(M/xM) with the lengths forced by
/// 0 → H⁰(M) → H⁰(M/xM) → H¹(M) →x H¹(M) → H¹(M/xM) → …,
/// valid when H⁰_𝔪(M) = (0):_M x. Matlis duality turns (0):_{Hⁱ}x and
/// Hⁱ/xHⁱ into Eᵢ/xEᵢ and (0):_{Eᵢ}x for Eᵢ = Ext^{n−i}(M,S).
pub fn les_consistency(ring: &Ring, m: &Module, x: &Poly) -> Result<LesCheck> {
    let tors = h0_module(ring, m)?;
    let killed = colon_elem(ring, m.num(), x, m.den())?;
    if &killed != tors.num() {
        return Err(Error::NotApplicable(String::from("H⁰(M) differs from (0):_M x")));
    }
    let lc = LocalCohomology::new(ring, m)?;
    let mx = crate::koszul::quotient_by_ideal(ring, m, core::slice::from_ref(x))?;
    let lq = LocalCohomology::new(ring, &mx)?;
    let d = m.dimension(ring).max(0) as usize;
    let ord = ring.order();
    let mod_x = |e: &Module| -> Result<Length> {
        let xe: Vec<FreeVector> = e.num().basis().iter().map(|g| g.mul_poly(x, &ord, ring.field())).collect();
        Ok(length_of(ring, e.num().clone(), e.den().add_gens(ring, &xe)?))
    };
    let killed_by_x =
        |e: &Module| -> Result<Length> { Ok(length_of(ring, colon_elem(ring, e.num(), x, e.den())?, e.den().clone())) };
    let add = |a: Length, b: Length| match (a, b) {
        (Length::Finite(p), Length::Finite(q)) => Length::Finite(p + q),
        _ => Length::Infinite,
    };
    let mut checked = Vec::new();
    let mut quotient_h = Vec::new();
    let mut holds = true;
    for i in 0..=d {
        let lhs = lq.h(ring, i);
        quotient_h.push(lhs);
        let first = if i == 0 {
            lc.h(ring, 0)
        } else {
            match lc.dual(i) {
                Some(e) => killed_by_x(e)?,
                None => Length::Finite(0),
            }
        };
        let second = match lc.dual(i + 1) {
            Some(e) => mod_x(e)?,
            None => Length::Finite(0),
        };
        let rhs = add(first, second);
        if lhs.is_finite() && rhs.is_finite() {
            checked.push(i);
        }
        holds &= lhs == rhs;
    }
    Ok(LesCheck { holds, checked, quotient_h })
}

/// e₀(q; M) from λ(M/q^{n+1}M) once its (d+1)-st differences vanish twice.
pub fn multiplicity(ring: &Ring, m: &Module, q: &ParameterSequence) -> Result<u64> {
    let d = m.dimension(ring);
    if d < 0 {
        return Ok(0);
    }
    let d = d as usize;
    let mut w = m.num().clone();
    let mut vals: Vec<i64> = Vec::new();
    for _ in 0..=ring.caps.psi_max + d as u32 + 2 {
        w = next_power(ring, m, q.elems(), &w)?;
        match length_of(ring, m.num().clone(), w.clone()) {
            Length::Finite(v) => vals.push(v as i64),
            Length::Infinite => return Err(Error::NotApplicable(String::from("q is not a system of parameters"))),
        }
        let diffs = differences(&vals, d + 1);
        if diffs.len() >= 2 && diffs[diffs.len() - 2..].iter().all(|&v| v == 0) {
            let top = differences(&vals, d);
            return Ok(*top.last().unwrap() as u64);
        }
    }
    Err(Error::CapExceeded(String::from("Hilbert-Samuel function did not stabilize")))
}

/// k-fold forward differences.
pub fn differences(vals: &[i64], k: usize) -> Vec<i64> {
    let mut v = vals.to_vec();
    for _ in 0..k {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardSop {
    pub colength: u64,
    pub e0: u64,
    pub sv_invariant: u64,
    pub standard: bool,
}

/// λ(M/qM) − e₀(q;M) = 𝕀(M) for a full sop q.
pub fn standard_sop_check(ring: &Ring, m: &Module, lc: &LocalCohomology, q: &ParameterSequence) -> Result<StandardSop> {
    let sv = lc
        .sv_invariant(ring)
        .ok_or_else(|| Error::NotApplicable(String::from("module does not have finite local cohomology")))?;
    let quotient = crate::koszul::quotient_by_ideal(ring, m, q.elems())?;
    let colength = quotient
        .length(ring)
        .finite()
        .ok_or_else(|| Error::NotApplicable(String::from("not a full system of parameters")))?;
    let e0 = multiplicity(ring, m, q)?;
    Ok(StandardSop { colength, e0, sv_invariant: sv, standard: colength - e0 == sv })
}

/// Σ_{j=1}^{r−i} C(r−i−1, j−1)·hʲ for i = 0..r−1; `h` must reach index r.
pub fn flc_k_coeffs(h: &[u64], r: usize) -> Vec<u64> {
    (0..r)
        .map(|i| {
            (1..=r - i)
                .map(|j| binomial((r - i - 1) as i64, j as i64 - 1) as u64 * h.get(j).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

/// (bounds on kᵢ for i < r, bound on χ₁) in terms of hⁱ(M).
pub fn lambda_gamma_bounds(h: &[u64], r: usize) -> (Vec<u64>, u64) {
    let gamma = (0..r).map(|i| binomial(r as i64 - 1, i as i64) as u64 * h.get(i).copied().unwrap_or(0)).sum();
    (flc_k_coeffs(h, r), gamma)
}

/// 𝔞(M) = ∏_{i<r} (ann Hⁱ)^{C(r−1,i)}, an ideal of S given by generators.
pub fn gamma_ideal(ring: &Ring, lc: &LocalCohomology, r: usize) -> Result<Vec<Poly>> {
    let mut acc = vec![Poly::constant(1)];
    for i in 0..r {
        let a = lc.annihilator(ring, i)?.polys(ring);
        for _ in 0..binomial(r as i64 - 1, i as i64) {
            let prod: Vec<Poly> = acc.iter().flat_map(|f| a.iter().map(move |g| f.mul(g, ring.ctx()))).collect();
            acc = Submodule::ideal(ring, &prod)?.polys(ring);
        }
    }
    Ok(acc)
}
