//! Dense monomials in at most 16 variables and the standard orders on them.

use core::cmp::Ordering;
use core::fmt;

pub const MAX_VARS: usize = 16;

/// Monomial order selector. The Gröbner engine always refines by total
/// (shifted) degree first, so `Lex` is only meaningful for [`compare`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OrderTag {
    #[default]
    Degrevlex,
    Deglex,
    Lex,
}

/// x^e with a cached total degree. Exponents past the ring arity are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::default();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    /// Panics if more than 16 exponents are given.
    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Self::default();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = e as u16;
            m.deg += e;
        }
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    /// Index of the last variable with a nonzero exponent, plus one.
    pub fn arity(&self) -> usize {
        self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    /// Bit i set iff x_i divides the monomial.
    #[inline]
    pub fn support(&self) -> u32 {
        let mut s = 0;
        for (i, &e) in self.exps.iter().enumerate() {
            if e != 0 {
                s |= 1 << i;
            }
        }
        s
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += o.exps[i];
        }
        m.deg += o.deg;
        m
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.exps[i] <= o.exps[i])
    }

    /// `o / self` when `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        if !self.divides(o) {
            return None;
        }
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        Some(m)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.support() & o.support() == 0
    }

    /// Colon of monomials: the smallest m with m·o divisible by self.
    pub fn colon(&self, o: &Monomial) -> Monomial {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].saturating_sub(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut m = *self;
        for e in m.exps.iter_mut() {
            *e *= k as u16;
        }
        m.deg *= k;
        m
    }

    /// Remaps exponents so that variable i goes to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut m = Monomial::default();
        for (i, &j) in perm.iter().enumerate() {
            m.exps[j] = self.exps[i];
        }
        m.deg = self.deg;
        m
    }
}

/// Reverse lexicographic tiebreak: at the last differing variable, the
/// smaller exponent wins.
#[inline]
pub(crate) fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for i in (0..MAX_VARS).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

#[inline]
pub(crate) fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    for i in 0..MAX_VARS {
        if a.exps[i] != b.exps[i] {
            return a.exps[i].cmp(&b.exps[i]);
        }
    }
    Ordering::Equal
}

/// Compares two monomials; `Greater` means `a` is the larger one.
pub fn compare(a: &Monomial, b: &Monomial, order: OrderTag) -> Ordering {
    match order {
        OrderTag::Degrevlex => a.deg.cmp(&b.deg).then_with(|| revlex(a, b)),
        OrderTag::Deglex => a.deg.cmp(&b.deg).then_with(|| lex(a, b)),
        OrderTag::Lex => lex(a, b),
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.arity();
        write!(f, "x^{:?}", &self.exps[..n])
    }
}
