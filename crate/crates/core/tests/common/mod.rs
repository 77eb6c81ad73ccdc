#![allow(dead_code)]

use jtk_core::expr::parse_poly;
use jtk_core::koszul::ParameterSequence;
use jtk_core::submodule::poly_vector;
use jtk_core::{Caps, Field, FreeVector, Module, Monomial, Poly, Ring, Submodule};

pub fn field() -> Field {
    Field::new(32003).unwrap()
}

pub fn names(vars: &str) -> Vec<String> {
    vars.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// k[vars]/(rels) over GF(32003).
pub fn ring(vars: &str, rels: &[&str]) -> Ring {
    let s = Ring::polynomial(field(), names(vars)).unwrap();
    let rels: Vec<Poly> = rels.iter().map(|t| parse_poly(&s, t).unwrap()).collect();
    Ring::quotient(field(), names(vars), rels, Caps::default()).unwrap()
}

pub fn p(r: &Ring, text: &str) -> Poly {
    parse_poly(r, text).unwrap()
}

pub fn ps(r: &Ring, texts: &[&str]) -> Vec<Poly> {
    texts.iter().map(|t| p(r, t)).collect()
}

pub fn vec1(r: &Ring, text: &str) -> FreeVector {
    poly_vector(r, &p(r, text))
}

pub fn ideal(r: &Ring, gens: &[&str]) -> Submodule {
    Submodule::ideal(r, &ps(r, gens)).unwrap()
}

pub fn seq(r: &Ring, gens: &[&str]) -> ParameterSequence {
    ParameterSequence::new(r, ps(r, gens)).unwrap()
}

pub fn ring_module(r: &Ring) -> Module {
    Module::ring_module(r).unwrap()
}

/// The ideal generated by `gens` as a module.
pub fn ideal_module(r: &Ring, gens: &[&str]) -> Module {
    let vs: Vec<FreeVector> = gens.iter().map(|g| vec1(r, g)).collect();
    Module::submodule(r, &[0], &vs).unwrap()
}

/// k[x,y,z,w1..wq]/(x²z, xy², xyz, xz²).
pub fn xz_ring(q: usize) -> Ring {
    let mut vars = String::from("x,y,z");
    for i in 1..=q {
        vars.push_str(&format!(",w{i}"));
    }
    ring(&vars, &["x^2*z", "x*y^2", "x*y*z", "x*z^2"])
}

pub fn xz_seq(r: &Ring, q: usize) -> ParameterSequence {
    let mut g = vec![String::from("z")];
    g.extend((1..=q).map(|i| format!("w{i}")));
    let refs: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
    seq(r, &refs)
}

/// k[Y,Z]/(p ∩ q ∩ (Y1², Y2, Y3, Z1², Z2, Z3)), generators written out.
pub fn sv_ring() -> Ring {
    ring(
        "y1,y2,y3,z1,z2,z3",
        &["y1*z2", "y1*z3", "y2*z1", "y2*z2", "y2*z3", "y3*z1", "y3*z2", "y3*z3", "y1^2*z1", "y1*z1^2"],
    )
}

/// k[x,y1..yd]/(x*y1, .., x*yd).
pub fn seq_cm_ring(d: usize) -> Ring {
    let mut vars = String::from("x");
    let mut rels = Vec::new();
    for i in 1..=d {
        vars.push_str(&format!(",y{i}"));
        rels.push(format!("x*y{i}"));
    }
    let refs: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
    ring(&vars, &refs)
}

pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return if d == 0 { vec![Monomial::one()] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for m in monomials_of_degree(n - 1, d - e) {
            let mut ex: Vec<u32> = (0..n - 1).map(|v| m.exp(v)).collect();
            ex.push(e);
            out.push(Monomial::from_exps(&ex));
        }
    }
    out
}

/// Rank of a list of polynomials as vectors over GF(p), by dense elimination.
pub fn rank_mod_p(polys: &[Poly], basis: &[Monomial]) -> usize {
    const P: u64 = 32003;
    let mut rows: Vec<Vec<u64>> = polys
        .iter()
        .map(|f| {
            let mut row = vec![0u64; basis.len()];
            for (m, c) in f.terms() {
                let j = basis.iter().position(|b| b == m).unwrap();
                row[j] = *c as u64;
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..basis.len() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], P - 2, P);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col] * inv % P;
                for j in col..basis.len() {
                    rows[i][j] = (rows[i][j] + P - f * rows[rank][j] % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Rank of dense rows over GF(32003).
pub fn dense_rank(mut rows: Vec<Vec<u64>>) -> usize {
    const P: u64 = 32003;
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], P - 2, P);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col] * inv % P;
                for j in col..width {
                    rows[i][j] = (rows[i][j] + P - f * rows[rank][j] % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}
