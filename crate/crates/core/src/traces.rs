//! Markov traces on singular Hecke algebras: the basis `T_0^d .. T_d^d`,
//! the recursive Φ construction, the universal trace and the independence
//! matrix.
//!
//! `T_k^d(β) = k!(d-k)! Σ_{|S|=k} tr(β(S))` where `β(S)` resolves the
//! singular letters in `S` to positive crossings and deletes the others, and
//! `tr` is the Ocneanu trace.

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::braid::{BraidWord, Letter};
use crate::coeffs::{CoeffError, RationalFn, Var};
use crate::hecke::{self, HeckeError};
use crate::invariant::{self, InvariantError, InvariantPoly};
use crate::singular::{SingularElem, WordSum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace index {k} out of range for degree {d}")]
    KOutOfRange { k: usize, d: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("{0}")]
    Invariant(String),
}

impl From<InvariantError> for TraceError {
    fn from(e: InvariantError) -> Self {
        TraceError::Invariant(e.to_string())
    }
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |a, b| a * b)
}

fn resolution_traces(w: &BraidWord) -> Vec<(u32, RationalFn)> {
    let d = w.degree();
    (0..1u64 << d)
        .into_par_iter()
        .map(|mask| {
            let t = hecke::word_trace(&w.resolution(mask)).expect("resolutions are non-singular");
            (mask.count_ones(), t)
        })
        .collect()
}

/// `(T_0^d(w), .., T_d^d(w))`.
pub fn trace_vector(w: &BraidWord) -> Vec<RationalFn> {
    let d = w.degree();
    let mut sums = vec![RationalFn::zero(); d + 1];
    for (k, t) in resolution_traces(w) {
        let k = k as usize;
        sums[k] = &sums[k] + &t;
    }
    sums.into_iter()
        .enumerate()
        .map(|(k, s)| s.scale_int(factorial(k) * factorial(d - k)))
        .collect()
}

/// `T_k^d(w)` from the closed formula.
pub fn basis_trace(k: usize, w: &BraidWord) -> Result<RationalFn, TraceError> {
    let d = w.degree();
    if k > d {
        return Err(TraceError::KOutOfRange { k, d });
    }
    Ok(trace_vector(w).swap_remove(k))
}

/// `T_k^d` built by `T_k^d = Φ_0(T_k^{d-1})` for `k < d` and
/// `T_d^d = Φ_1(T_{d-1}^{d-1})`.
pub fn basis_trace_recursive(k: usize, w: &BraidWord) -> Result<RationalFn, TraceError> {
    let d = w.degree();
    if k > d {
        return Err(TraceError::KOutOfRange { k, d });
    }
    basis_route(k, d).eval(w)
}

/// Same traces through `T_k^d = Φ_1(T_{k-1}^{d-1})` for every `k >= 1`.
pub fn basis_trace_alt(k: usize, w: &BraidWord) -> Result<RationalFn, TraceError> {
    let d = w.degree();
    if k > d {
        return Err(TraceError::KOutOfRange { k, d });
    }
    alt_route(k, d).eval(w)
}

/// A degree-`d` Markov trace given by a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkovTrace {
    /// The Ocneanu trace, degree 0.
    Ocneanu,
    /// `T_k^d` through the closed formula.
    Basis { k: usize, d: usize },
    /// `Φ_ε(inner)`: evaluate `inner` on `g_ε` of the argument.
    Phi { eps: u8, inner: Box<MarkovTrace> },
}

impl MarkovTrace {
    pub fn degree(&self) -> usize {
        match self {
            MarkovTrace::Ocneanu => 0,
            MarkovTrace::Basis { d, .. } => *d,
            MarkovTrace::Phi { inner, .. } => inner.degree() + 1,
        }
    }

    pub fn phi(eps: u8, inner: MarkovTrace) -> MarkovTrace {
        MarkovTrace::Phi {
            eps,
            inner: Box::new(inner),
        }
    }

    pub fn eval(&self, w: &BraidWord) -> Result<RationalFn, TraceError> {
        if w.degree() != self.degree() {
            return Err(TraceError::DegreeMismatch(w.degree(), self.degree()));
        }
        match self {
            MarkovTrace::Ocneanu => Ok(hecke::word_trace(w)?),
            MarkovTrace::Basis { k, .. } => basis_trace(*k, w),
            MarkovTrace::Phi { eps, inner } => {
                let mut acc = RationalFn::zero();
                for j in 0..w.degree() {
                    acc = &acc + &inner.eval(&w.resolve_one(j, *eps == 1))?;
                }
                Ok(acc)
            }
        }
    }

    pub fn eval_sum(&self, s: &WordSum) -> Result<RationalFn, TraceError> {
        let mut acc = RationalFn::zero();
        for (w, c) in s.terms() {
            acc = &acc + &(c * &self.eval(w)?);
        }
        Ok(acc)
    }
}

fn basis_route(k: usize, d: usize) -> MarkovTrace {
    if d == 0 {
        MarkovTrace::Ocneanu
    } else if k < d {
        MarkovTrace::phi(0, basis_route(k, d - 1))
    } else {
        MarkovTrace::phi(1, basis_route(d - 1, d - 1))
    }
}

fn alt_route(k: usize, d: usize) -> MarkovTrace {
    if d == 0 {
        MarkovTrace::Ocneanu
    } else if k == 0 {
        MarkovTrace::phi(0, alt_route(0, d - 1))
    } else {
        MarkovTrace::phi(1, alt_route(k - 1, d - 1))
    }
}

/// Trace vector of a formal sum whose words share one degree. The empty sum
/// gives an empty vector.
pub fn trace_vector_sum(s: &WordSum) -> Result<Vec<RationalFn>, TraceError> {
    let mut acc: Option<Vec<RationalFn>> = None;
    for (w, c) in s.terms() {
        let v = trace_vector(w);
        acc = Some(match acc {
            None => v.iter().map(|t| c * t).collect(),
            Some(a) => {
                if a.len() != v.len() {
                    return Err(TraceError::DegreeMismatch(a.len() - 1, v.len() - 1));
                }
                a.iter().zip(&v).map(|(x, t)| x + &(c * t)).collect()
            }
        });
    }
    Ok(acc.unwrap_or_default())
}

pub fn trace_vector_elem(e: &SingularElem) -> Result<Vec<RationalFn>, TraceError> {
    trace_vector_sum(&e.to_word_sum())
}

/// Equality in the space of Markov traces of degree `d`: all basis traces
/// agree. Traces are stable under adding strands, so strand counts may differ.
pub fn sums_trace_equal(a: &WordSum, b: &WordSum) -> Result<bool, TraceError> {
    let diff = a - b;
    Ok(trace_vector_sum(&diff)?.iter().all(|t| t.is_zero()))
}

/// Decides whether two words with the same number of singular points have
/// closures in the same class: raw trace vectors at equal strand counts,
/// normalized invariants otherwise.
pub fn markov_class_eq(w1: &BraidWord, w2: &BraidWord) -> Result<bool, TraceError> {
    if w1.degree() != w2.degree() {
        return Err(TraceError::DegreeMismatch(w1.degree(), w2.degree()));
    }
    if w1.strands() == w2.strands() && w1.epsilon() == w2.epsilon() {
        return Ok(trace_vector(w1) == trace_vector(w2));
    }
    Ok(invariant::basis_invariants(w1)? == invariant::basis_invariants(w2)?)
}

fn q_to_s2() -> [(Var, RationalFn); 1] {
    [(Var::Q, RationalFn::var_pow(Var::S, 2))]
}

/// `Σ_S s^{|S|} X^{|S|} Y^{d-|S|} tr(β(S))` with `q = s^2`.
pub fn universal_trace(w: &BraidWord) -> InvariantPoly {
    let d = w.degree();
    let mut sums = vec![RationalFn::zero(); d + 1];
    for (k, t) in resolution_traces(w) {
        let k = k as usize;
        sums[k] = &sums[k] + &t;
    }
    let coeffs = sums
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            let t = t.substitute(&q_to_s2()).expect("no poles");
            &RationalFn::var_pow(Var::S, k as i32) * &t
        })
        .collect();
    InvariantPoly::new(coeffs)
}

/// The same trace from the basis: `Σ_k s^k / ((d-k)! k!) X^k Y^{d-k} T_k^d`.
pub fn universal_trace_from_basis(w: &BraidWord) -> InvariantPoly {
    let d = w.degree();
    let coeffs = trace_vector(w)
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            let t = t.substitute(&q_to_s2()).expect("no poles");
            let den = RationalFn::constant(factorial(k) * factorial(d - k));
            (&RationalFn::var_pow(Var::S, k as i32) * &t)
                .div(&den)
                .expect("nonzero")
        })
        .collect();
    InvariantPoly::new(coeffs)
}

/// `γ_b = τ_d .. τ_1 σ_1 .. σ_b` on `max(d+1, 2)` strands.
pub fn gamma_word(d: usize, b: usize) -> BraidWord {
    let n = (d + 1).max(2);
    let mut letters: Vec<Letter> = (1..=d).rev().map(Letter::Sing).collect();
    letters.extend((1..=b).map(Letter::Pos));
    BraidWord::new(n, letters).expect("indices in range")
}

/// Entry `(a, b)` is `T_a^d(γ_b)`.
pub fn independence_matrix(d: usize) -> Vec<Vec<RationalFn>> {
    let cols: Vec<Vec<RationalFn>> = (0..=d).map(|b| trace_vector(&gamma_word(d, b))).collect();
    (0..=d)
        .map(|a| (0..=d).map(|b| cols[b][a].clone()).collect())
        .collect()
}

/// Exact determinant by fraction-free elimination over rational functions.
pub fn determinant(m: &[Vec<RationalFn>]) -> RationalFn {
    let n = m.len();
    let mut a: Vec<Vec<RationalFn>> = m.to_vec();
    let mut det = RationalFn::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RationalFn::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        let pinv = p.inv().expect("pivot is nonzero");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &pinv;
            let (top, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = &*x - &(&f * y);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse, random_word};
    use crate::coeffs::{q, q_minus_one, z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> BraidWord {
        parse(s, None).unwrap()
    }

    #[test]
    fn closed_formula_examples() {
        assert!(basis_trace(0, &w("t1")).unwrap().is_one());
        assert_eq!(basis_trace(1, &w("t1")).unwrap(), z());
        assert_eq!(
            basis_trace(1, &w("t1 s1")).unwrap(),
            &(&q_minus_one() * &z()) + &q()
        );
        let plain = w("s1 s2' s1");
        assert_eq!(
            basis_trace(0, &plain).unwrap(),
            hecke::word_trace(&plain).unwrap()
        );
        assert!(matches!(
            basis_trace(2, &w("t1")),
            Err(TraceError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(basis_trace_recursive(1, &w("t1")).unwrap(), z());
        let tt = w("t1 t2");
        assert_eq!(
            basis_trace_recursive(0, &tt).unwrap(),
            basis_trace(0, &tt).unwrap()
        );
    }

    #[test]
    fn routes_agree_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let d = rng.random_range(1..4);
            let n = rng.random_range(2..5);
            let len = rng.random_range(d..9);
            let word = random_word(&mut rng, n, len, d);
            for k in 0..=d {
                let a = basis_trace(k, &word).unwrap();
                assert_eq!(basis_trace_recursive(k, &word).unwrap(), a);
                assert_eq!(basis_trace_alt(k, &word).unwrap(), a);
            }
        }
    }

    #[test]
    fn universal_trace_of_t1() {
        let u = universal_trace(&w("t1"));
        let s = RationalFn::var(Var::S);
        assert_eq!(u.coeff(1), &s * &z());
        assert!(u.coeff(0).is_one());
        assert_eq!(u, universal_trace_from_basis(&w("t1")));
    }

    #[test]
    fn independence_small() {
        let m = independence_matrix(1);
        assert!(m[0][0].is_one());
        assert_eq!(m[0][1], z());
        assert_eq!(m[1][0], z());
        assert_eq!(m[1][1], &(&q_minus_one() * &z()) + &q());
        let m0 = independence_matrix(0);
        assert_eq!(m0.len(), 1);
        assert!(m0[0][0].is_one());
    }

    #[test]
    fn cyclic_rotation_is_same_class() {
        assert!(markov_class_eq(&w("s1 t1"), &w("t1 s1")).unwrap());
        assert!(markov_class_eq(&w("t1"), &w("t1 s2")).unwrap());
        assert!(!markov_class_eq(&w("t1"), &w("t1 s1")).unwrap());
        assert!(markov_class_eq(&w("t1"), &w("t1 t1")).is_err());
    }

    #[test]
    fn determinant_of_diagonal() {
        let m = vec![
            vec![RationalFn::constant(2), RationalFn::zero()],
            vec![RationalFn::zero(), q()],
        ];
        assert_eq!(determinant(&m), q().scale_int(2));
    }
}
