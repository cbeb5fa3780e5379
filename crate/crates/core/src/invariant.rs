//! Link invariants from the universal trace.
//!
//! Coefficients come in three flavours:
//! * trace form, in `(s, z)`, as produced by [`traces::universal_trace`];
//! * raw form, in `(s, v)` after `q = s^2` and `z = (s^2 - 1)/(1 - s^2 v^2)`;
//! * canonical form, Laurent in `(t, x)` with `t = s v` and `x = s - s^{-1}`.
//!
//! The raw invariant puts the weight `s X` on each positive resolution,
//! which is `(s/v) X` relative to the resolution-weighted invariant. Only
//! the latter satisfies `I(τ_i w) = X I(σ_i w) + Y I(w)` and lands in
//! `Z[t^±, x^±][X, Y]`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::braid::{BraidWord, Letter};
use crate::coeffs::{CoeffError, Exponents, LaurentPoly, RationalFn, Var};
use crate::traces::{self, factorial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("not expressible in t and x; residual: {residual}")]
    NotExpressible { residual: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Homogeneous polynomial in `X, Y` of degree `d`; entry `k` is the
/// coefficient of `X^k Y^{d-k}`.
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantPoly {
    coeffs: Vec<RationalFn>,
}

impl InvariantPoly {
    pub fn new(coeffs: Vec<RationalFn>) -> Self {
        assert!(!coeffs.is_empty(), "degree needs at least one coefficient");
        InvariantPoly { coeffs }
    }

    pub fn zero(d: usize) -> Self {
        InvariantPoly::new(vec![RationalFn::zero(); d + 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `X^k Y^{d-k}`.
    pub fn coeff(&self, k: usize) -> RationalFn {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFn::zero)
    }

    pub fn coeffs(&self) -> &[RationalFn] {
        &self.coeffs
    }

    pub fn map<F>(&self, f: F) -> Result<InvariantPoly, CoeffError>
    where
        F: Fn(&RationalFn) -> Result<RationalFn, CoeffError>,
    {
        Ok(InvariantPoly::new(
            self.coeffs.iter().map(f).collect::<Result<_, _>>()?,
        ))
    }

    pub fn scale(&self, c: &RationalFn) -> InvariantPoly {
        InvariantPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `X ↦ factor · X`.
    pub fn rescale_x(&self, factor: &RationalFn) -> InvariantPoly {
        let mut p = RationalFn::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &p);
            p = &p * factor;
        }
        InvariantPoly::new(out)
    }

    pub fn times_x(&self) -> InvariantPoly {
        let mut out = vec![RationalFn::zero()];
        out.extend(self.coeffs.iter().cloned());
        InvariantPoly::new(out)
    }

    pub fn times_y(&self) -> InvariantPoly {
        let mut out = self.coeffs.clone();
        out.push(RationalFn::zero());
        InvariantPoly::new(out)
    }

    pub fn add(&self, other: &InvariantPoly) -> InvariantPoly {
        assert_eq!(self.degree(), other.degree(), "degrees must agree");
        InvariantPoly::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &InvariantPoly) -> InvariantPoly {
        self.add(&other.scale(&RationalFn::constant(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `(X-degree, Y-degree, coefficient)` for the nonzero entries, highest
    /// X-degree first.
    pub fn entries(&self) -> Vec<(usize, usize, &RationalFn)> {
        let d = self.degree();
        (0..=d)
            .rev()
            .filter(|&k| !self.coeffs[k].is_zero())
            .map(|k| (k, d - k, &self.coeffs[k]))
            .collect()
    }
}

pub fn monomial_label(k: usize, m: usize) -> String {
    let part = |name: &str, e: usize| match e {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    };
    [part("X", k), part("Y", m)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        if entries.is_empty() {
            return f.write_str("0");
        }
        if self.degree() == 0 {
            return write!(f, "{}", entries[0].2);
        }
        let parts: Vec<String> = entries
            .iter()
            .map(|(k, m, c)| format!("{}: {}", monomial_label(*k, *m), c))
            .collect();
        f.write_str(&parts.join(" ; "))
    }
}

impl fmt::Debug for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn s() -> RationalFn {
    RationalFn::var(Var::S)
}

fn v() -> RationalFn {
    RationalFn::var(Var::V)
}

/// `(s^2 - 1) / (1 - s^2 v^2)`.
pub fn z_in_s_v() -> RationalFn {
    let s2 = s().pow(2).unwrap();
    let num = &s2 - &RationalFn::one();
    let den = &RationalFn::one() - &(&s2 * &v().pow(2).unwrap());
    num.div(&den).expect("nonzero")
}

/// `t = s v` in raw variables.
pub fn t_in_s_v() -> RationalFn {
    &s() * &v()
}

/// `x = s - s^{-1}`.
pub fn x_in_s() -> RationalFn {
    &s() - &RationalFn::var_pow(Var::S, -1)
}

/// Normalizing factor `z^{-(n-1)} v^{ε-n+1}`, still in `(z, v)`.
fn normalization(w: &BraidWord) -> RationalFn {
    let n = w.strands() as i32;
    let e = w.epsilon() as i32;
    let zpow = RationalFn::var(Var::Z).pow(1 - n).expect("z is nonzero");
    &zpow * &RationalFn::var_pow(Var::V, e - n + 1)
}

fn to_s_v(c: &RationalFn) -> RationalFn {
    c.substitute(&[(Var::Q, s().pow(2).unwrap()), (Var::Z, z_in_s_v())])
        .expect("no poles at the substitution")
}

/// The invariant straight from the universal trace, in `(s, v)`.
pub fn invariant_raw(w: &BraidWord) -> InvariantPoly {
    let norm = normalization(w);
    let u = traces::universal_trace(w);
    InvariantPoly::new(u.coeffs().iter().map(|c| to_s_v(&(c * &norm))).collect())
}

/// `Σ_S X^{|S|} Y^{d-|S|} I(β(S))` over all resolutions, in `(s, v)`.
pub fn resolution_invariant(w: &BraidWord) -> InvariantPoly {
    let d = w.degree();
    let values: Vec<(usize, RationalFn)> = w
        .resolutions()
        .into_par_iter()
        .map(|(subset, beta)| (subset.len(), invariant_raw(&beta).coeff(0)))
        .collect();
    let mut coeffs = vec![RationalFn::zero(); d + 1];
    for (k, v) in values {
        coeffs[k] = &coeffs[k] + &v;
    }
    InvariantPoly::new(coeffs)
}

/// `I_{T_k^d}(w) = z^{-(n-1)} v^{ε-n+1} T_k^d(w)`, in `(s, v)`.
pub fn basis_invariants(w: &BraidWord) -> Result<Vec<RationalFn>, InvariantError> {
    let norm = normalization(w);
    Ok(traces::trace_vector(w)
        .iter()
        .map(|t| to_s_v(&(t * &norm)))
        .collect())
}

/// Assembles `Σ_k s^k / ((d-k)! k!) X^k Y^{d-k} I_k`.
pub fn from_basis_invariants(values: &[RationalFn]) -> InvariantPoly {
    let d = values.len() - 1;
    InvariantPoly::new(
        values
            .iter()
            .enumerate()
            .map(|(k, iv)| {
                let den = RationalFn::constant(factorial(k) * factorial(d - k));
                (&RationalFn::var_pow(Var::S, k as i32) * iv)
                    .div(&den)
                    .expect("nonzero")
            })
            .collect(),
    )
}

/// Rewrites one raw coefficient as a Laurent polynomial in `(t, x)`.
pub fn canonical_coeff(c: &RationalFn) -> Result<RationalFn, InvariantError> {
    let not_expr = |r: String| InvariantError::NotExpressible { residual: r };
    let t_over_s = &RationalFn::var(Var::T) * &RationalFn::var_pow(Var::S, -1);
    let c = c.substitute(&[(Var::V, t_over_s)])?;
    let s2m1 = &LaurentPoly::var_pow(Var::S, 2) - &LaurentPoly::one();
    let mut den = c.denom().clone();
    let mut m = 0i32;
    while let Some(rest) = den.div_exact(&s2m1) {
        den = rest;
        m += 1;
    }
    let Some(quot) = c.numer().div_exact(&den) else {
        return Err(not_expr(c.to_string()));
    };
    // value = quot / (s^2 - 1)^m = (quot s^{-m}) / x^m
    let quot = quot.shift(&Exponents::single(Var::S, -m));
    let mut by_t: std::collections::BTreeMap<i32, Vec<(i32, num_bigint::BigInt)>> =
        Default::default();
    for (e, a) in quot.terms() {
        let others = Var::ALL
            .iter()
            .any(|&var| var != Var::S && var != Var::T && e.get(var) != 0);
        if others {
            return Err(not_expr(quot.to_string()));
        }
        by_t.entry(e.get(Var::T))
            .or_default()
            .push((e.get(Var::S), a.clone()));
    }
    let x = LaurentPoly::var(Var::S) - LaurentPoly::var_pow(Var::S, -1);
    let mut terms = Vec::new();
    for (tj, coeffs) in by_t {
        let mut f = LaurentPoly::from_terms(
            coeffs
                .into_iter()
                .map(|(se, a)| (Exponents::single(Var::S, se), a)),
        );
        while let Some((e, a)) = f.leading().map(|(e, a)| (e.get(Var::S), a.clone())) {
            if e < 0 {
                let rest = f.shift(&Exponents::single(Var::T, tj));
                return Err(not_expr(rest.to_string()));
            }
            f = &f - &x.pow(e as u32).scale(&a);
            let mut ex = Exponents::single(Var::T, tj);
            ex.0[Var::X.index()] = e - m;
            terms.push((ex, a));
        }
    }
    Ok(RationalFn::from_poly(LaurentPoly::from_terms(terms)))
}

/// Rewrites every coefficient in `(t, x)`.
pub fn to_canonical(p: &InvariantPoly) -> Result<InvariantPoly, InvariantError> {
    Ok(InvariantPoly::new(
        p.coeffs()
            .iter()
            .map(canonical_coeff)
            .collect::<Result<_, _>>()?,
    ))
}

/// True when every coefficient has integer coefficients in `t^±, x^±` only.
pub fn is_canonical(p: &InvariantPoly) -> bool {
    p.coeffs().iter().all(|c| {
        c.as_laurent().is_some_and(|l| {
            l.terms().all(|(e, _)| {
                Var::ALL
                    .iter()
                    .all(|&var| var == Var::T || var == Var::X || e.get(var) == 0)
            })
        })
    })
}

/// The invariant printed by default: resolution weights in `(t, x)`.
pub fn canonical_invariant(w: &BraidWord) -> Result<InvariantPoly, InvariantError> {
    to_canonical(&resolution_invariant(w))
}

/// Which version of the invariant a check runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavour {
    Raw,
    Resolution,
}

fn compute(w: &BraidWord, flavour: Flavour) -> InvariantPoly {
    match flavour {
        Flavour::Raw => invariant_raw(w),
        Flavour::Resolution => resolution_invariant(w),
    }
}

fn check_index(w: &BraidWord, i: usize) -> Result<(), InvariantError> {
    if i == 0 || i >= w.strands() {
        return Err(InvariantError::IndexOutOfRange {
            index: i,
            strands: w.strands(),
        });
    }
    Ok(())
}

/// `t^{-1} I(w σ_i) - t I(w σ_i^{-1}) = x I(w)`.
pub fn skein_check(w: &BraidWord, i: usize, flavour: Flavour) -> Result<bool, InvariantError> {
    check_index(w, i)?;
    let plus = compute(&w.append(Letter::Pos(i)), flavour);
    let minus = compute(&w.append(Letter::Neg(i)), flavour);
    let zero = compute(w, flavour);
    let t = t_in_s_v();
    let lhs = plus.scale(&t.inv()?).sub(&minus.scale(&t));
    Ok(lhs == zero.scale(&x_in_s()))
}

/// `I(τ_i w) = X I(σ_i w) + Y I(w)`, with `X` replaced by `(s/v) X` for the
/// raw invariant.
pub fn desing_check(w: &BraidWord, i: usize, flavour: Flavour) -> Result<bool, InvariantError> {
    check_index(w, i)?;
    let sing = compute(&w.prepend(Letter::Sing(i)), flavour);
    let pos = compute(&w.prepend(Letter::Pos(i)), flavour);
    let zero = compute(w, flavour);
    let weight = match flavour {
        Flavour::Raw => s().div(&v())?,
        Flavour::Resolution => RationalFn::one(),
    };
    let rhs = pos.scale(&weight).times_x().add(&zero.times_y());
    Ok(sing == rhs)
}

/// `Y^d` times the invariant of the fully smoothed word, which is what the
/// resolution invariant becomes at `X = 0`.
pub fn smoothing_value(w: &BraidWord) -> RationalFn {
    invariant_raw(&w.resolution(0)).coeff(0)
}

/// Coefficients of an invariant as text, for JSON and tables.
pub fn json_terms(p: &InvariantPoly) -> Vec<serde_json::Value> {
    p.entries()
        .into_iter()
        .map(|(k, m, c)| serde_json::json!({"X": k, "Y": m, "coeff": c.to_string()}))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse;

    fn w(s: &str) -> BraidWord {
        parse(s, None).unwrap()
    }

    fn canon(s: &str) -> String {
        canonical_invariant(&w(s)).unwrap().to_string()
    }

    #[test]
    fn classical_values() {
        assert_eq!(canon(""), "1");
        assert_eq!(canon("s1"), "1");
        assert_eq!(
            canonical_invariant(&parse("", Some(2)).unwrap())
                .unwrap()
                .to_string(),
            "1*t^-1*x^-1 + -1*t*x^-1"
        );
        assert_eq!(canon("s1 s1"), "1*t*x^-1 + -1*t^3*x^-1 + 1*t*x");
        assert_eq!(canon("s1 s1 s1"), "2*t^2 + -1*t^4 + 1*t^2*x^2");
    }

    #[test]
    fn raw_values() {
        assert!(invariant_raw(&w("")).coeff(0).is_one());
        assert!(invariant_raw(&w("s1")).coeff(0).is_one());
        let unlink = invariant_raw(&parse("", Some(2)).unwrap()).coeff(0);
        let expect = (&RationalFn::var(Var::Z) * &v()).inv().unwrap();
        assert_eq!(unlink, to_s_v(&expect));
    }

    #[test]
    fn singular_values() {
        assert_eq!(canon("t1"), "X: 1 ; Y: 1*t^-1*x^-1 + -1*t*x^-1");
        assert_eq!(canon("t1 s1"), "X: 1*t*x^-1 + -1*t^3*x^-1 + 1*t*x ; Y: 1");
        let raw = invariant_raw(&w("t1"));
        assert!(matches!(
            to_canonical(&raw),
            Err(InvariantError::NotExpressible { .. })
        ));
        assert_eq!(
            raw.rescale_x(&v().div(&s()).unwrap()),
            resolution_invariant(&w("t1"))
        );
    }

    #[test]
    fn basis_reconstruction() {
        for word in ["t1", "t1 s1 t2 s1'", "t1 t1 s1"] {
            let b = basis_invariants(&w(word)).unwrap();
            assert_eq!(from_basis_invariants(&b), invariant_raw(&w(word)));
        }
    }

    #[test]
    fn relations_on_small_words() {
        assert!(skein_check(&w("s1"), 1, Flavour::Resolution).unwrap());
        assert!(skein_check(&w("t1 s2"), 2, Flavour::Raw).unwrap());
        let e2 = parse("", Some(2)).unwrap();
        assert!(desing_check(&e2, 1, Flavour::Resolution).unwrap());
        assert!(desing_check(&w("s2 t1"), 2, Flavour::Raw).unwrap());
    }

    #[test]
    fn labels() {
        assert_eq!(monomial_label(1, 0), "X");
        assert_eq!(monomial_label(1, 1), "X*Y");
        assert_eq!(monomial_label(0, 2), "Y^2");
        assert_eq!(monomial_label(2, 1), "X^2*Y");
    }
}
