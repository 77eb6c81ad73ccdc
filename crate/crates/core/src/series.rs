//! Hilbert series N(t)/(1−t)^e with Laurent numerators, and lengths.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::monomial::{Monomial, MAX_VARS};

/// Length of a module: a count, or infinite. Infinity is a value, not an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(v) => Some(v),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(v) => write!(f, "{v}"),
            Length::Infinite => f.write_str("infinite"),
        }
    }
}

/// A graded series Σ num[i]·t^(low+i) / (1−t)^den, always kept with the
/// smallest possible `den` and trimmed numerator. Zero has an empty numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSeries {
    num: Vec<i64>,
    low: i32,
    den: u32,
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

impl GradedSeries {
    pub fn zero() -> Self {
        GradedSeries { num: Vec::new(), low: 0, den: 0 }
    }

    pub fn new(num: Vec<i64>, low: i32, den: u32) -> Self {
        let mut s = GradedSeries { num, low, den };
        s.normalize();
        s
    }

    /// The polynomial Σ c_i t^i.
    pub fn polynomial(num: Vec<i64>) -> Self {
        Self::new(num, 0, 0)
    }

    fn normalize(&mut self) {
        while self.num.last() == Some(&0) {
            self.num.pop();
        }
        let lead = self.num.iter().take_while(|&&c| c == 0).count();
        if lead == self.num.len() {
            self.num.clear();
            self.low = 0;
            self.den = 0;
            return;
        }
        self.num.drain(..lead);
        self.low += lead as i32;
        while self.den > 0 && self.num.iter().sum::<i64>() == 0 {
            // N = (1−t)Q  ⇒  Q_k = Σ_{i≤k} N_i
            let mut acc = 0;
            let mut q = Vec::with_capacity(self.num.len() - 1);
            for &c in &self.num[..self.num.len() - 1] {
                acc += c;
                q.push(acc);
            }
            self.num = q;
            self.den -= 1;
            while self.num.last() == Some(&0) {
                self.num.pop();
            }
        }
    }

    pub fn numerator(&self) -> &[i64] {
        &self.num
    }

    /// Exponent of t carried by the first numerator coefficient.
    pub fn low_degree(&self) -> i32 {
        self.low
    }

    pub fn denom_exponent(&self) -> u32 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Krull dimension of a module with this series (−1 for zero).
    pub fn dimension(&self) -> i32 {
        if self.is_zero() {
            -1
        } else {
            self.den as i32
        }
    }

    pub fn length(&self) -> Length {
        if self.den == 0 {
            Length::Finite(self.num.iter().sum::<i64>().max(0) as u64)
        } else {
            Length::Infinite
        }
    }

    /// Coefficient of t^k.
    pub fn coeff(&self, k: i32) -> i64 {
        let mut s = 0;
        for (i, &c) in self.num.iter().enumerate() {
            let j = (k - self.low - i as i32) as i64;
            if j < 0 {
                continue;
            }
            s += c * if self.den == 0 {
                (j == 0) as i64
            } else {
                binomial(j + self.den as i64 - 1, self.den as i64 - 1)
            };
        }
        s
    }

    /// Coefficients of t^from ..= t^to.
    pub fn truncation(&self, from: i32, to: i32) -> Vec<i64> {
        (from..=to).map(|k| self.coeff(k)).collect()
    }

    /// Numerator rewritten over (1−t)^e for some e ≥ den; `None` if e < den.
    pub fn numerator_over(&self, e: u32) -> Option<(Vec<i64>, i32)> {
        if e < self.den {
            return None;
        }
        let mut num = self.num.clone();
        for _ in self.den..e {
            let mut next = vec![0; num.len() + 1];
            for (i, &c) in num.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c;
            }
            num = next;
        }
        Some((num, self.low))
    }

    pub fn add(&self, o: &GradedSeries) -> GradedSeries {
        self.lin(o, 1)
    }

    pub fn sub(&self, o: &GradedSeries) -> GradedSeries {
        self.lin(o, -1)
    }

    pub fn scale(&self, c: i64) -> GradedSeries {
        Self::new(self.num.iter().map(|&v| v * c).collect(), self.low, self.den)
    }

    fn lin(&self, o: &GradedSeries, sign: i64) -> GradedSeries {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.scale(sign);
        }
        let e = self.den.max(o.den);
        let (a, la) = self.numerator_over(e).unwrap();
        let (b, lb) = o.numerator_over(e).unwrap();
        let low = la.min(lb);
        let hi = (la + a.len() as i32).max(lb + b.len() as i32);
        let mut num = vec![0; (hi - low) as usize];
        for (i, &c) in a.iter().enumerate() {
            num[(la - low) as usize + i] += c;
        }
        for (i, &c) in b.iter().enumerate() {
            num[(lb - low) as usize + i] += sign * c;
        }
        Self::new(num, low, e)
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i32) -> GradedSeries {
        if self.is_zero() {
            return self.clone();
        }
        GradedSeries { num: self.num.clone(), low: self.low + k, den: self.den }
    }

    /// 1/(1−t)^e.
    pub fn free(e: u32) -> GradedSeries {
        Self::new(vec![1], 0, e)
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let nterms = self.num.iter().filter(|&&c| c != 0).count();
        let wrap = nterms > 1 && self.den > 0;
        if wrap {
            f.write_str("(")?;
        }
        let mut first = true;
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.low + i as i32;
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            match (a, e) {
                (_, 0) => write!(f, "{sign}{a}")?,
                (1, 1) => write!(f, "{sign}t")?,
                (1, _) => write!(f, "{sign}t^{e}")?,
                (_, 1) => write!(f, "{sign}{a}t")?,
                _ => write!(f, "{sign}{a}t^{e}")?,
            }
            first = false;
        }
        if wrap {
            f.write_str(")")?;
        }
        match self.den {
            0 => {}
            1 => f.write_str("/(1-t)")?,
            d => write!(f, "/(1-t)^{d}")?,
        }
        Ok(())
    }
}

fn minimalize(gens: &mut Vec<Monomial>) {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut keep: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens.iter() {
        if !keep.iter().any(|k| k.divides(g)) {
            keep.push(*g);
        }
    }
    *gens = keep;
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_into(acc: &mut Vec<i64>, b: &[i64], shift: usize) {
    if acc.len() < b.len() + shift {
        acc.resize(b.len() + shift, 0);
    }
    for (i, &c) in b.iter().enumerate() {
        acc[i + shift] += c;
    }
}

/// Numerator N(t) with HS(S/J) = N(t)/(1−t)^n for the monomial ideal J.
pub fn ideal_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut g = gens.to_vec();
    minimalize(&mut g);
    numerator_rec(g)
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.degree() == 0) {
        return vec![0];
    }
    // pairwise coprime generators form a regular sequence
    let mut seen = 0u32;
    let mut coprime = true;
    for m in &gens {
        let s = m.support();
        if s & seen != 0 {
            coprime = false;
            break;
        }
        seen |= s;
    }
    if coprime {
        let mut acc = vec![1i64];
        for m in &gens {
            let mut f = vec![0; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] = -1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // pivot on the variable occurring in the most generators
    let mut counts = [0usize; MAX_VARS];
    for m in &gens {
        for (i, c) in counts.iter_mut().enumerate() {
            if m.exp(i) > 0 {
                *c += 1;
            }
        }
    }
    let v = (0..MAX_VARS).max_by_key(|&i| (counts[i], core::cmp::Reverse(i))).unwrap();
    let mut es: Vec<u32> = gens.iter().map(|m| m.exp(v)).filter(|&e| e > 0).collect();
    es.sort_unstable();
    // stay below any pure power of x_v so that J + (p) ≠ J
    let pure = gens.iter().filter(|m| m.exp(v) == m.degree()).map(|m| m.degree()).min().unwrap_or(u32::MAX);
    let e = es[es.len() / 2].min(pure - 1).max(1);
    let mut pe = [0u32; MAX_VARS];
    pe[v] = e;
    let p = Monomial::from_exps(&pe);
    // N(J) = N(J + (p)) + t^deg(p)·N(J : p)
    let mut with_p = gens.clone();
    with_p.push(p);
    minimalize(&mut with_p);
    let mut colon: Vec<Monomial> = gens.iter().map(|m| m.colon(&p)).collect();
    minimalize(&mut colon);
    let mut acc = numerator_rec(with_p);
    let b = numerator_rec(colon);
    poly_add_into(&mut acc, &b, e as usize);
    acc
}

/// Series of F/L where L is generated by the monomials `leads[p]·e_p`.
pub fn quotient_series(leads: &[Vec<Monomial>], shifts: &[i32], nvars: usize) -> GradedSeries {
    let mut acc = GradedSeries::zero();
    for (p, gens) in leads.iter().enumerate() {
        let n = ideal_numerator(gens);
        acc = acc.add(&GradedSeries::new(n, shifts[p], nvars as u32));
    }
    acc
}
