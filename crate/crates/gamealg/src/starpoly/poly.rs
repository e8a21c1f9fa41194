//! Noncommutative *-polynomials over the complex field in named generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{Scalar, C};

/// A generator or its adjoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    pub adjoint: bool,
}

impl Letter {
    pub fn new(gen: impl Into<String>) -> Self {
        Letter {
            gen: gen.into(),
            adjoint: false,
        }
    }

    pub fn star(gen: impl Into<String>) -> Self {
        Letter {
            gen: gen.into(),
            adjoint: true,
        }
    }
}

/// A word in the free *-algebra; the empty word is the unit.
pub type Word = Vec<Letter>;

/// Element of the free complex *-algebra on named generators, stored as a
/// map from canonical-ordered words to nonzero coefficients.
#[derive(Clone, PartialEq)]
pub struct StarPolynomial<T: Scalar> {
    terms: BTreeMap<Word, C<T>>,
}

impl<T: Scalar> StarPolynomial<T> {
    pub fn zero() -> Self {
        StarPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn constant(c: C<T>) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn real_constant(x: T) -> Self {
        Self::constant(Complex::new(x, T::zero()))
    }

    pub fn generator(name: impl Into<String>) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![Letter::new(name)], Complex::new(T::one(), T::zero()));
        p
    }

    pub fn from_word(word: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(word, Complex::new(T::one(), T::zero()));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C<T>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds a coefficient to a word, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: C<T>) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let updated = *o.get() + coeff;
                if updated.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = updated;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in other.terms.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in other.terms.iter() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: C<T>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (w, &x) in self.terms.iter() {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, &c1) in self.terms.iter() {
            for (w2, &c2) in other.terms.iter() {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// The *-involution: reverse each word, flip adjoint flags, conjugate
    /// coefficients.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, &c) in self.terms.iter() {
            let word: Word = w
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen.clone(),
                    adjoint: !l.adjoint,
                })
                .collect();
            out.add_term(word, c.conj());
        }
        out
    }

    /// Generator names appearing in any term.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for w in self.terms.keys() {
            for l in w {
                set.insert(l.gen.clone());
            }
        }
        set
    }

    /// Sum of coefficient magnitudes; zero iff the polynomial is zero.
    pub fn coefficient_mass(&self) -> T {
        self.terms
            .values()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Substitute each generator by a polynomial (adjoint letters get the
    /// adjoint of the substitute). Unsubstituted generators map to
    /// themselves.
    pub fn substitute(&self, map: &BTreeMap<String, StarPolynomial<T>>) -> Self {
        let mut out = Self::zero();
        for (w, &c) in self.terms.iter() {
            let mut acc = Self::constant(c);
            for l in w {
                let base = match map.get(&l.gen) {
                    Some(p) => p.clone(),
                    None => Self::generator(l.gen.clone()),
                };
                let factor = if l.adjoint { base.adjoint() } else { base };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }
}

impl<T: Scalar> fmt::Debug for StarPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:+.4}{:+.4}i)", c.re, c.im)?;
            for l in w {
                write!(f, " {}{}", l.gen, if l.adjoint { "*" } else { "" })?;
            }
        }
        Ok(())
    }
}
