//! Elimination-based constructions: preimages, kernels, intersections,
//! colons, annihilators and saturation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::series::Length;
use crate::submodule::{Module, Submodule};
use crate::vector::{FreeVector, Term};

/// { Σ cₖ·domainₖ : Σ cₖ·imagesₖ ∈ ⟨target⟩ } for a homogeneous map sending
/// `domain[k]` (in ⊕S(−src_shifts)) to `images[k]` (in ⊕S(−tgt_shifts)).
///
/// Computed from a Gröbner basis of the graph {(φ(d), d)} + (target, 0) under
/// an order eliminating the target block.
pub fn preimage(
    ring: &Ring,
    src_shifts: &[i32],
    domain: &[FreeVector],
    tgt_shifts: &[i32],
    images: &[FreeVector],
    target: &[FreeVector],
) -> Result<Submodule> {
    if domain.len() != images.len() {
        return Err(Error::RankMismatch { expected: domain.len(), found: images.len() });
    }
    let mut offset: Option<i32> = None;
    for (d, im) in domain.iter().zip(images) {
        match (d.degree(), im.degree()) {
            (Some(a), Some(b)) => match offset {
                None => offset = Some(b - a),
                Some(o) if o != b - a => {
                    return Err(Error::ShiftMismatch(format!("map is not homogeneous: offsets {o} and {}", b - a)))
                }
                _ => {}
            },
            (None, Some(_)) => return Err(Error::ShiftMismatch(String::from("zero maps to nonzero"))),
            _ => {}
        }
    }
    let off = offset.unwrap_or(0);
    let rt = tgt_shifts.len() as u32;
    let mut comb_shifts: Vec<i32> = tgt_shifts.to_vec();
    comb_shifts.extend(src_shifts.iter().map(|s| s + off));
    let mut inputs: Vec<Vec<Term>> = Vec::with_capacity(domain.len() + target.len());
    for t in target {
        inputs.push(t.terms().to_vec());
    }
    for (d, im) in domain.iter().zip(images) {
        let mut v: Vec<Term> = im.terms().to_vec();
        v.extend(d.terms().iter().map(|t| Term { pos: t.pos + rt, deg: t.deg + off, ..*t }));
        if !v.is_empty() {
            inputs.push(v);
        }
    }
    let e = ring.engine(rt, comb_shifts.len());
    let gb = e.groebner(inputs)?;
    let ord = ring.order();
    let basis: Vec<FreeVector> = gb
        .into_iter()
        .filter(|v| v[0].pos >= rt)
        .map(|v| {
            FreeVector::from_terms(
                v.into_iter().map(|t| Term { pos: t.pos - rt, deg: t.deg - off, ..t }).collect(),
                &ord,
                ring.field(),
            )
        })
        .collect();
    // A reduced basis for the elimination order restricts to a reduced basis
    // of the source block in its canonical order.
    let mut basis = basis;
    basis.sort_by(|a, b| ord.cmp(a.lead().unwrap(), b.lead().unwrap()));
    Ok(Submodule::from_basis(src_shifts, basis))
}

/// Kernel of S^m → F/W, e_k ↦ images[k], with e_k of degree `src_shifts[k]`.
pub fn kernel(
    ring: &Ring,
    src_shifts: &[i32],
    images: &[FreeVector],
    tgt_shifts: &[i32],
    modulo: &[FreeVector],
) -> Result<Submodule> {
    let domain: Vec<FreeVector> = (0..src_shifts.len()).map(|k| FreeVector::unit(k, src_shifts)).collect();
    preimage(ring, src_shifts, &domain, tgt_shifts, images, modulo)
}

/// First syzygies of `gens` ⊂ F; the source basis e_k has degree deg(gens[k]).
pub fn syzygies(ring: &Ring, shifts: &[i32], gens: &[FreeVector]) -> Result<(Vec<i32>, Submodule)> {
    let src: Vec<i32> = gens
        .iter()
        .map(|g| g.degree().ok_or_else(|| Error::ShiftMismatch(String::from("zero generator has no degree"))))
        .collect::<Result<_>>()?;
    let k = kernel(ring, &src, gens, shifts, &[])?;
    Ok((src, k))
}

pub fn intersect(ring: &Ring, a: &Submodule, b: &Submodule) -> Result<Submodule> {
    if a.shifts() != b.shifts() {
        return Err(Error::ShiftMismatch(String::from("intersection of different ambients")));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Submodule::zero(a.shifts()));
    }
    if b.contains_all(ring, a)? {
        return Ok(a.clone());
    }
    if a.contains_all(ring, b)? {
        return Ok(b.clone());
    }
    preimage(ring, a.shifts(), a.basis(), b.shifts(), a.basis(), b.basis())
}

/// { v ∈ domain : f·v ∈ W }.
pub fn colon_elem(ring: &Ring, domain: &Submodule, f: &Poly, w: &Submodule) -> Result<Submodule> {
    if f.is_zero() {
        return Ok(domain.clone());
    }
    let images = domain.times_poly_all(ring, f);
    preimage(ring, domain.shifts(), domain.basis(), w.shifts(), &images, w.basis())
}

/// { v ∈ domain : J·v ⊆ W } for J generated by `ideal`.
pub fn colon_ideal(ring: &Ring, domain: &Submodule, ideal: &[Poly], w: &Submodule) -> Result<Submodule> {
    let ideal: Vec<&Poly> = ideal.iter().filter(|f| !f.is_zero()).collect();
    if ideal.is_empty() {
        return Ok(domain.clone());
    }
    if ideal.len() == 1 {
        return colon_elem(ring, domain, ideal[0], w);
    }
    let rank = w.rank();
    let mut tgt_shifts = Vec::new();
    let mut target = Vec::new();
    for (k, f) in ideal.iter().enumerate() {
        let e = f.degree().unwrap() as i32;
        if !f.is_homogeneous() {
            return Err(Error::Inhomogeneous(ring.fmt_poly(f)));
        }
        tgt_shifts.extend(w.shifts().iter().map(|s| s - e));
        for b in w.basis() {
            target.push(shift_block(b, (k * rank) as u32, -e));
        }
    }
    let ord = ring.order();
    let images: Vec<FreeVector> = domain
        .basis()
        .iter()
        .map(|v| {
            let mut terms = Vec::new();
            for (k, f) in ideal.iter().enumerate() {
                let e = f.degree().unwrap() as i32;
                let fv = v.mul_poly(f, &ord, ring.field());
                terms.extend(shift_block(&fv, (k * rank) as u32, -e).terms().iter().copied());
            }
            FreeVector::from_terms(terms, &ord, ring.field())
        })
        .collect();
    preimage(ring, domain.shifts(), domain.basis(), &tgt_shifts, &images, &target)
}

fn shift_block(v: &FreeVector, pos_off: u32, deg_off: i32) -> FreeVector {
    FreeVector::from_sorted(
        v.terms().iter().map(|t| Term { pos: t.pos + pos_off, deg: t.deg + deg_off, ..*t }).collect(),
    )
}

/// W :_V J^∞ by iterated colon until two consecutive bases agree.
pub fn saturate(ring: &Ring, domain: &Submodule, ideal: &[Poly], w: &Submodule) -> Result<Submodule> {
    if ideal.iter().any(|f| !f.is_zero() && f.degree() == Some(0)) {
        return intersect(ring, domain, w)?.sum(ring, w);
    }
    let mut cur = w.clone();
    for _ in 0..=ring.caps.max_degree {
        let next = colon_ideal(ring, domain, ideal, &cur)?.sum(ring, &cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::CapExceeded(String::from("saturation did not stabilize")))
}

/// W : x_i^∞ in F, by Bayer's trick with x_i moved to the last position.
pub fn saturate_var(ring: &Ring, w: &Submodule, i: usize) -> Result<Submodule> {
    let n = ring.nvars();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(i, n - 1);
    let ord = ring.order();
    let field = ring.field();
    let swap = |v: &FreeVector| {
        FreeVector::from_terms(
            v.terms().iter().map(|t| Term { mono: t.mono.permuted(&perm), ..*t }).collect(),
            &ord,
            field,
        )
    };
    let permuted: Vec<FreeVector> = w.basis().iter().map(swap).collect();
    let gb = ring.gb(w.shifts(), &permuted)?;
    let divided: Vec<FreeVector> = gb
        .iter()
        .map(|v| {
            let k = v.terms().iter().map(|t| t.mono.exp(n - 1)).min().unwrap_or(0);
            let mut e = [0u32; crate::monomial::MAX_VARS];
            e[n - 1] = k;
            let d = crate::monomial::Monomial::from_exps(&e);
            let terms = v
                .terms()
                .iter()
                .map(|t| Term { mono: d.quotient_of(&t.mono).unwrap(), deg: t.deg - k as i32, ..*t })
                .collect();
            swap(&FreeVector::from_sorted(terms))
        })
        .collect();
    Submodule::new(ring, w.shifts(), &divided)
}

/// W :_F 𝔪^∞. Tries W : x_i^∞ for each variable and accepts the first whose
/// excess over W has finite length; otherwise intersects all of them.
pub fn torsion(ring: &Ring, w: &Submodule) -> Result<Submodule> {
    let n = ring.nvars();
    if n == 0 {
        return Ok(w.clone());
    }
    let wser = w.quotient_series(ring);
    let mut sats = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let s = saturate_var(ring, w, i)?;
        if wser.sub(&s.quotient_series(ring)).length().is_finite() {
            return Ok(s);
        }
        sats.push(s);
    }
    let mut acc = sats.pop().unwrap();
    for s in sats.iter().rev() {
        acc = intersect(ring, &acc, s)?;
    }
    Ok(acc)
}

/// H⁰_𝔪(M) as a submodule (Sat ∩ V)/U of M = V/U.
pub fn h0_module(ring: &Ring, m: &Module) -> Result<Module> {
    let sat = torsion(ring, m.den())?;
    let num = if m.num() == &Submodule::free(m.shifts()) { sat } else { intersect(ring, &sat, m.num())? };
    Ok(Module::from_parts(num, m.den().clone()))
}

/// h⁰(M) = λ(H⁰_𝔪(M)), always finite.
pub fn h0(ring: &Ring, m: &Module) -> Result<u64> {
    match h0_module(ring, m)?.length(ring) {
        Length::Finite(v) => Ok(v),
        Length::Infinite => Err(Error::CapExceeded(String::from("torsion submodule of infinite length"))),
    }
}

/// ann_S(V/U) as an ideal of S (contains a).
pub fn annihilator(ring: &Ring, m: &Module) -> Result<Submodule> {
    let gens = m.min_generators(ring)?;
    if gens.is_empty() {
        return Ok(Submodule::free(&[0]));
    }
    let rank = m.shifts().len();
    let mut tgt_shifts = Vec::new();
    let mut target = Vec::new();
    let mut image_terms = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let d = g.degree().unwrap();
        tgt_shifts.extend(m.shifts().iter().map(|s| s - d));
        for b in m.den().basis() {
            target.push(shift_block(b, (k * rank) as u32, -d));
        }
        image_terms.extend(shift_block(g, (k * rank) as u32, -d).terms().iter().copied());
    }
    let image = FreeVector::from_terms(image_terms, &ring.order(), ring.field());
    let one = FreeVector::unit(0, &[0]);
    preimage(ring, &[0], &[one], &tgt_shifts, &[image], &target)
}

impl Submodule {
    /// f·b for every basis element, zeros kept so indices line up.
    pub(crate) fn times_poly_all(&self, ring: &Ring, f: &Poly) -> Vec<FreeVector> {
        let ord = ring.order();
        self.basis().iter().map(|b| b.mul_poly(f, &ord, ring.field())).collect()
    }
}
