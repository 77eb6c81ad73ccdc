//! Graded submodules of free S-modules and subquotients V/U.
//!
//! An R-module is stored as V/U with U ⊆ V ⊆ F = ⊕ S(−aᵢ) and a·F ⊆ U, so
//! every computation happens over the polynomial ring S.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::series::{quotient_series, GradedSeries, Length};
use crate::vector::{FreeVector, Term};

/// A submodule of F held as its reduced Gröbner basis, so equality of
/// submodules is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    shifts: Vec<i32>,
    basis: Vec<FreeVector>,
}

impl Submodule {
    pub fn new(ring: &Ring, shifts: &[i32], gens: &[FreeVector]) -> Result<Self> {
        let basis = ring.gb(shifts, gens)?;
        Ok(Submodule { shifts: shifts.to_vec(), basis })
    }

    pub(crate) fn from_basis(shifts: &[i32], basis: Vec<FreeVector>) -> Self {
        Submodule { shifts: shifts.to_vec(), basis }
    }

    pub fn zero(shifts: &[i32]) -> Self {
        Submodule { shifts: shifts.to_vec(), basis: Vec::new() }
    }

    /// All of F.
    pub fn free(shifts: &[i32]) -> Self {
        let basis = (0..shifts.len()).map(|p| FreeVector::unit(p, shifts)).collect();
        Submodule { shifts: shifts.to_vec(), basis }
    }

    /// a·F.
    pub fn relations(ring: &Ring, shifts: &[i32]) -> Result<Self> {
        Self::new(ring, shifts, &ring.relation_vectors(shifts))
    }

    /// The ideal generated by `gens`, as a submodule of S¹.
    pub fn ideal(ring: &Ring, gens: &[Poly]) -> Result<Self> {
        let vs: Vec<FreeVector> = gens.iter().map(|p| poly_vector(ring, p)).collect();
        Self::new(ring, &[0], &vs)
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    /// Buchberger's criterion on the stored basis: every S-vector reduces to 0.
    pub fn satisfies_buchberger(&self, ring: &Ring) -> bool {
        let basis: Vec<Vec<Term>> = self.basis.iter().map(|v| v.terms().to_vec()).collect();
        ring.engine(0, self.rank()).verify(&basis)
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn basis(&self) -> &[FreeVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis elements of a rank-one submodule as polynomials.
    pub fn polys(&self, ring: &Ring) -> Vec<Poly> {
        self.basis.iter().map(|v| v.component(0, ring.ctx())).collect()
    }

    fn check_rank(&self, v: &FreeVector) -> Result<()> {
        match v.max_pos() {
            Some(p) if p >= self.rank() => Err(Error::RankMismatch { expected: self.rank(), found: p + 1 }),
            _ => Ok(()),
        }
    }

    pub fn normal_form(&self, ring: &Ring, v: &FreeVector) -> Result<FreeVector> {
        self.check_rank(v)?;
        let e = ring.engine(0, self.rank());
        let idx =
            crate::gb::Basis::from_elems(self.basis.iter().map(|b| crate::gb::Elem::new(b.terms().to_vec())).collect());
        Ok(FreeVector::from_sorted(e.reduce(v.terms().to_vec(), &idx)))
    }

    pub fn contains(&self, ring: &Ring, v: &FreeVector) -> Result<bool> {
        Ok(self.normal_form(ring, v)?.is_zero())
    }

    pub fn contains_all(&self, ring: &Ring, other: &Submodule) -> Result<bool> {
        for v in &other.basis {
            if !self.contains(ring, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, ring: &Ring, other: &Submodule) -> Result<Submodule> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::new(ring, &self.shifts, &gens)
    }

    pub fn add_gens(&self, ring: &Ring, extra: &[FreeVector]) -> Result<Submodule> {
        let mut gens = self.basis.clone();
        gens.extend(extra.iter().cloned());
        Self::new(ring, &self.shifts, &gens)
    }

    /// Generators f·b for b in the basis (not a basis itself).
    pub fn times_poly(&self, ring: &Ring, f: &Poly) -> Vec<FreeVector> {
        let ord = ring.order();
        self.basis.iter().map(|b| b.mul_poly(f, &ord, ring.field())).filter(|v| !v.is_zero()).collect()
    }

    /// Generators of J·N for an ideal J given by generators.
    pub fn times_ideal(&self, ring: &Ring, ideal: &[Poly]) -> Vec<FreeVector> {
        ideal.iter().flat_map(|f| self.times_poly(ring, f)).collect()
    }

    pub fn leads(&self) -> Vec<Vec<Monomial>> {
        let mut out = alloc::vec![Vec::new(); self.rank()];
        for b in &self.basis {
            let t = b.lead().unwrap();
            out[t.pos as usize].push(t.mono);
        }
        out
    }

    /// Hilbert series of F/N.
    pub fn quotient_series(&self, ring: &Ring) -> GradedSeries {
        quotient_series(&self.leads(), &self.shifts, ring.nvars())
    }
}

pub fn poly_vector(ring: &Ring, p: &Poly) -> FreeVector {
    FreeVector::from_components(core::slice::from_ref(p), &[0], ring.ctx().order, ring.field())
}

/// A subquotient V/U of a graded free module, U ⊆ V.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    num: Submodule,
    den: Submodule,
}

impl Module {
    /// V/U, replacing V by V + U.
    pub fn new(ring: &Ring, num: Submodule, den: Submodule) -> Result<Self> {
        if num.shifts != den.shifts {
            return Err(Error::ShiftMismatch(alloc::string::String::from("numerator and denominator ambients differ")));
        }
        let num = if num.contains_all(ring, &den)? { num } else { num.sum(ring, &den)? };
        Ok(Module { num, den })
    }

    pub(crate) fn from_parts(num: Submodule, den: Submodule) -> Self {
        Module { num, den }
    }

    /// R itself.
    pub fn ring_module(ring: &Ring) -> Result<Self> {
        Ok(Module { num: Submodule::free(&[0]), den: Submodule::relations(ring, &[0])? })
    }

    /// F/(N + aF) with N generated by the columns `rels`.
    pub fn cokernel(ring: &Ring, shifts: &[i32], rels: &[FreeVector]) -> Result<Self> {
        let mut gens = rels.to_vec();
        gens.extend(ring.relation_vectors(shifts));
        Ok(Module { num: Submodule::free(shifts), den: Submodule::new(ring, shifts, &gens)? })
    }

    /// (N + aF)/aF with N generated by `gens`.
    pub fn submodule(ring: &Ring, shifts: &[i32], gens: &[FreeVector]) -> Result<Self> {
        let den = Submodule::relations(ring, shifts)?;
        let num = den.add_gens(ring, gens)?;
        Ok(Module { num, den })
    }

    pub fn num(&self) -> &Submodule {
        &self.num
    }

    pub fn den(&self) -> &Submodule {
        &self.den
    }

    pub fn shifts(&self) -> &[i32] {
        self.num.shifts()
    }

    pub fn is_zero(&self) -> bool {
        self.num == self.den
    }

    pub fn series(&self, ring: &Ring) -> GradedSeries {
        self.den.quotient_series(ring).sub(&self.num.quotient_series(ring))
    }

    pub fn length(&self, ring: &Ring) -> Length {
        self.series(ring).length()
    }

    /// Krull dimension, −1 for the zero module.
    pub fn dimension(&self, ring: &Ring) -> i32 {
        self.series(ring).dimension()
    }

    /// V/(W + U) for W ⊆ F.
    pub fn quotient_by(&self, ring: &Ring, w: &[FreeVector]) -> Result<Module> {
        Ok(Module { num: self.num.clone(), den: self.den.add_gens(ring, w)? })
    }

    /// (W + U)/U for W ⊆ V.
    pub fn submodule_of(&self, ring: &Ring, w: &[FreeVector]) -> Result<Module> {
        Ok(Module { num: self.den.add_gens(ring, w)?, den: self.den.clone() })
    }

    /// A minimal homogeneous generating set of V modulo U.
    pub fn min_generators(&self, ring: &Ring) -> Result<Vec<FreeVector>> {
        let vars: Vec<Poly> = (0..ring.nvars()).map(Poly::var).collect();
        let mut mgens = self.num.times_ideal(ring, &vars);
        mgens.extend(self.den.basis().iter().cloned());
        let w = Submodule::new(ring, self.shifts(), &mgens)?;
        let mut cands = self.num.basis().to_vec();
        cands.sort_by_key(|v| v.degree());
        let keep = independent_modulo(ring, &w, &cands)?;
        Ok(keep.into_iter().map(|i| cands[i].clone()).collect())
    }
}

/// Indices of a maximal subfamily of `cands` that is k-linearly independent
/// modulo the submodule `w`, scanning in order.
pub fn independent_modulo(ring: &Ring, w: &Submodule, cands: &[FreeVector]) -> Result<Vec<usize>> {
    let field = ring.field();
    let ord = ring.order();
    let mut rows: Vec<Vec<Term>> = Vec::new();
    let mut keep = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        let mut r = w.normal_form(ring, c)?;
        loop {
            let Some(lt) = r.lead().copied() else { break };
            match rows.iter().find(|row| row[0].pos == lt.pos && row[0].mono == lt.mono) {
                Some(row) => {
                    let pivot = FreeVector::from_sorted(row.clone());
                    r = r.lin_comb(1, &pivot, field.neg(lt.c), &ord, field);
                }
                None => break,
            }
        }
        if !r.is_zero() {
            rows.push(r.monic(field).into_terms());
            keep.push(i);
        }
    }
    Ok(keep)
}
