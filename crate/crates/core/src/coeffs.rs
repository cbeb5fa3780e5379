//! Exact sparse Laurent polynomials and rational functions over a fixed
//! variable registry.
//!
//! Every coefficient in the crate lives here: Hecke parameters, trace values,
//! invariants before and after the change of variables. The registry is
//! closed and ordered, so an exponent vector is a plain `[i32; NVARS]`.
//!
//! Fractions are only normalized up to monomial content, integer content and
//! sign; there is no multivariate gcd. Equality is decided by
//! cross-multiplication, so it stays exact regardless.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub const NVARS: usize = 8;

/// Registry variables, in registry order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Hecke parameter.
    Q,
    /// Markov parameter.
    Z,
    /// Square root of `q`.
    S,
    /// Square root of `y`.
    V,
    T,
    X,
    /// Weight of the positive resolution of a singular crossing.
    BigX,
    /// Weight of the smoothing of a singular crossing.
    BigY,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Q,
        Var::Z,
        Var::S,
        Var::V,
        Var::T,
        Var::X,
        Var::BigX,
        Var::BigY,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        VarRegistry::NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        VarRegistry::NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| Var::ALL[i])
    }
}

/// The ordered variable registry `{q, z, s, v, t, x, X, Y}`.
///
/// Relations between the variables (`q = s^2`, `t = s v`, ...) are never
/// applied implicitly; they only enter through [`RationalFn::substitute`].
pub struct VarRegistry;

impl VarRegistry {
    pub const NAMES: [&'static str; NVARS] = ["q", "z", "s", "v", "t", "x", "X", "Y"];

    pub fn vars() -> &'static [Var; NVARS] {
        &Var::ALL
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at {var} = {value}")]
    PoleAtPoint { var: &'static str, value: String },
}

/// Exponent vector, one slot per registry variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponents(pub [i32; NVARS]);

impl Exponents {
    pub fn zero() -> Self {
        Exponents([0; NVARS])
    }

    pub fn single(var: Var, e: i32) -> Self {
        let mut a = [0; NVARS];
        a[var.index()] = e;
        Exponents(a)
    }

    pub fn get(&self, var: Var) -> i32 {
        self.0[var.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Exponents) -> Exponents {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Exponents(a)
    }

    fn sub(&self, other: &Exponents) -> Exponents {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(other.0.iter()) {
            *x -= *y;
        }
        Exponents(a)
    }

    fn ge(&self, other: &Exponents) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    /// Order used for rendering: compares from the last registry variable to
    /// the first.
    fn colex_cmp(&self, other: &Exponents) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<I: Into<BigInt>>(c: I) -> Self {
        Self::monomial(c, Exponents::zero())
    }

    pub fn monomial<I: Into<BigInt>>(c: I, exps: Exponents) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(1, Exponents::single(v, 1))
    }

    /// `v^e` for any integer `e`.
    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::monomial(1, Exponents::single(v, e))
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_zero() && c.is_one())
                .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// Returns the constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Variables with a nonzero exponent in some term.
    pub fn support(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|e| e.get(*v) != 0))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e.get(v) != 0)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &Exponents) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.add(e), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Componentwise minimum exponent over all terms (zero for the zero poly).
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Exponents::zero();
        };
        let mut m = first.0;
        for e in it {
            for (a, b) in m.iter_mut().zip(e.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        Exponents(m)
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Exponents::zero();
        };
        let mut m = first.0;
        for e in it {
            for (a, b) in m.iter_mut().zip(e.0.iter()) {
                *a = (*a).max(*b);
            }
        }
        Exponents(m)
    }

    /// Gcd of the integer coefficients (zero for the zero poly).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Leading term in the lexicographic order on exponent vectors.
    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor` as a Laurent polynomial with integer
    /// coefficients, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if divisor.is_monomial() {
            let (de, dc) = divisor.leading().unwrap();
            let mut out = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.insert(e.sub(de), q);
            }
            return Some(LaurentPoly { terms: out });
        }
        // Any exact quotient has exponents inside these bounds, which keeps
        // the lexicographic division loop finite for Laurent inputs.
        let lo = self.min_exponents().sub(&divisor.min_exponents());
        let hi = self.max_exponents().sub(&divisor.max_exponents());
        if !hi.ge(&lo) {
            return None;
        }
        let (dle, dlc) = divisor.leading().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            let qe = re.sub(&dle);
            if !qe.ge(&lo) || !hi.ge(&qe) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            let term = LaurentPoly::monomial(qc.clone(), qe);
            rem = &rem - &(divisor * &term);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Gcd up to units of the Laurent ring: no monomial factor, positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        let g = poly_gcd(&self.strip_monomial(), &other.strip_monomial());
        if g.leading().is_some_and(|(_, c)| c.is_negative()) {
            -&g
        } else {
            g
        }
    }

    fn strip_monomial(&self) -> LaurentPoly {
        let m = self.min_exponents();
        if m.is_zero() {
            self.clone()
        } else {
            self.shift(&Exponents::zero().sub(&m))
        }
    }

    /// Simultaneous substitution. Returns `(numerator, denominator)` with the
    /// denominator built from powers of the binding numerators/denominators.
    fn substitute_parts(&self, bindings: &[(Var, RationalFn)]) -> (LaurentPoly, LaurentPoly) {
        if bindings.is_empty() || self.is_zero() {
            return (self.clone(), LaurentPoly::one());
        }
        let lo = self.min_exponents();
        let hi = self.max_exponents();
        // For each bound variable: (index, lo', hi', powers of num, powers of den).
        struct Bound {
            idx: usize,
            lo: i32,
            hi: i32,
            num_pows: Vec<LaurentPoly>,
            den_pows: Vec<LaurentPoly>,
        }
        let mut bound = Vec::new();
        let mut common_den = LaurentPoly::one();
        for (var, value) in bindings {
            let idx = var.index();
            let l = lo.0[idx].min(0);
            let h = hi.0[idx].max(0);
            let span = (h - l) as usize;
            let mut num_pows = vec![LaurentPoly::one()];
            let mut den_pows = vec![LaurentPoly::one()];
            for _ in 0..span {
                let a = num_pows.last().unwrap() * &value.num;
                let b = den_pows.last().unwrap() * &value.den;
                num_pows.push(a);
                den_pows.push(b);
            }
            common_den = &common_den * &(&num_pows[(-l) as usize] * &den_pows[h as usize]);
            bound.push(Bound {
                idx,
                lo: l,
                hi: h,
                num_pows,
                den_pows,
            });
        }
        let mut num = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let mut rest = *e;
            let mut factor = LaurentPoly::constant(c.clone());
            for b in &bound {
                let k = e.0[b.idx];
                rest.0[b.idx] = 0;
                factor = &factor * &b.num_pows[(k - b.lo) as usize];
                factor = &factor * &b.den_pows[(b.hi - k) as usize];
            }
            num = &num + &factor.shift(&rest);
        }
        (num, common_den)
    }

    fn fmt_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.colex_cmp(b.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for v in Var::ALL {
                match e.get(v) {
                    0 => {}
                    1 => write!(f, "*{}", v.name())?,
                    k => write!(f, "*{}^{}", v.name(), k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(LaurentPoly, Add, add);
forward_owned!(LaurentPoly, Sub, sub);
forward_owned!(LaurentPoly, Mul, mul);

fn degree_in(p: &LaurentPoly, i: usize) -> i32 {
    p.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
}

/// Coefficient of `var_i^d`, with `var_i` removed.
fn coeff_in(p: &LaurentPoly, i: usize, d: i32) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (e, c) in &p.terms {
        if e.0[i] == d {
            let mut k = *e;
            k.0[i] = 0;
            out.terms.insert(k, c.clone());
        }
    }
    out
}

fn content_in(p: &LaurentPoly, i: usize) -> LaurentPoly {
    let mut degrees: Vec<i32> = p.terms.keys().map(|e| e.0[i]).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut g = LaurentPoly::zero();
    for d in degrees {
        g = poly_gcd(&g, &coeff_in(p, i, d));
        if g.is_constant() && g.as_constant().is_some_and(|c| c.abs().is_one()) {
            break;
        }
    }
    g
}

fn primitive_in(p: &LaurentPoly, i: usize) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let c = content_in(p, i);
    p.div_exact(&c).expect("content divides")
}

/// Sparse pseudo-remainder of `a` by `b` in `var_i`.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, i: usize) -> LaurentPoly {
    let db = degree_in(b, i);
    let lcb = coeff_in(b, i, db);
    let mut r = a.clone();
    while !r.is_zero() && degree_in(&r, i) >= db {
        let dr = degree_in(&r, i);
        let lcr = coeff_in(&r, i, dr).shift(&Exponents::single(VarRegistry::vars()[i], dr - db));
        r = &(&r * &lcb) - &(b * &lcr);
    }
    r
}

/// Gcd of ordinary polynomials (no negative exponents) by primitive
/// remainder sequences, recursing on one variable at a time.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (ma, mb) = (a.max_exponents(), b.max_exponents());
    let Some(i) = (0..NVARS).find(|&i| ma.0[i] > 0 || mb.0[i] > 0) else {
        return LaurentPoly::constant(a.content().gcd(&b.content()));
    };
    let c = poly_gcd(&content_in(a, i), &content_in(b, i));
    let mut p = primitive_in(a, i);
    let mut q = primitive_in(b, i);
    if degree_in(&p, i) < degree_in(&q, i) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if degree_in(&q, i) == 0 {
            p = LaurentPoly::one();
            break;
        }
        let r = pseudo_rem(&p, &q, i);
        p = q;
        q = primitive_in(&r, i);
    }
    if p.leading().is_some_and(|(_, c)| c.is_negative()) {
        p = -&p;
    }
    &c * &p
}

/// Fraction of Laurent polynomials.
///
/// Invariants: the denominator is nonzero, has no monomial factor, and its
/// lexicographically leading coefficient is positive; numerator and
/// denominator share no integer content.
#[derive(Clone)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFn::from_poly(LaurentPoly::one())
    }

    pub fn constant<I: Into<BigInt>>(c: I) -> Self {
        RationalFn::from_poly(LaurentPoly::constant(c))
    }

    /// `a / b` for integers.
    pub fn ratio<I: Into<BigInt>, J: Into<BigInt>>(a: I, b: J) -> Result<Self, CoeffError> {
        RationalFn::new(LaurentPoly::constant(a), LaurentPoly::constant(b))
    }

    pub fn var(v: Var) -> Self {
        RationalFn::from_poly(LaurentPoly::var(v))
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        RationalFn::from_poly(LaurentPoly::var_pow(v, e))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFn {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(RationalFn::normalized(num, den))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFn::zero();
        }
        // Move every monomial factor into the numerator.
        let dmin = den.min_exponents();
        let (mut num, mut den) = if dmin.is_zero() {
            (num, den)
        } else {
            let neg = Exponents::zero().sub(&dmin);
            (num.shift(&neg), den.shift(&neg))
        };
        if den.is_monomial() {
            // den is now a constant.
            let c = den.leading().unwrap().1.clone();
            return RationalFn::from_constant_den(num, c);
        }
        if let Some(q) = num.div_exact(&den) {
            return RationalFn::from_poly(q);
        }
        let g = num.content().gcd(&den.content());
        if !g.is_one() {
            num = num.div_exact(&LaurentPoly::constant(g.clone())).unwrap();
            den = den.div_exact(&LaurentPoly::constant(g)).unwrap();
        }
        if den.leading().unwrap().1.is_negative() {
            num = -&num;
            den = -&den;
        }
        RationalFn { num, den }
    }

    fn from_constant_den(num: LaurentPoly, c: BigInt) -> Self {
        let g = num.content().gcd(&c);
        let mut c = c / &g;
        let mut num = if g.is_one() {
            num
        } else {
            num.div_exact(&LaurentPoly::constant(g)).unwrap()
        };
        if c.is_negative() {
            c = -c;
            num = -&num;
        }
        RationalFn {
            num,
            den: LaurentPoly::constant(c),
        }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is `1`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn inv(&self) -> Result<RationalFn, CoeffError> {
        if self.num.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(RationalFn::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RationalFn) -> Result<RationalFn, CoeffError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: i32) -> Result<RationalFn, CoeffError> {
        if k >= 0 {
            Ok(RationalFn::normalized(
                self.num.pow(k as u32),
                self.den.pow(k as u32),
            ))
        } else {
            self.inv()?.pow(-k)
        }
    }

    pub fn scale_int<I: Into<BigInt>>(&self, c: I) -> RationalFn {
        RationalFn::normalized(self.num.scale(&c.into()), self.den.clone())
    }

    /// Simultaneous substitution `var ↦ value` for every binding.
    pub fn substitute(&self, bindings: &[(Var, RationalFn)]) -> Result<RationalFn, CoeffError> {
        let (n1, d1) = self.num.substitute_parts(bindings);
        let (n2, d2) = self.den.substitute_parts(bindings);
        let num = &n1 * &d2;
        let den = &d1 * &n2;
        RationalFn::new(num, den)
    }

    /// Specializes `var` at `value`. A common factor `(var - value)` of the
    /// numerator and denominator is cancelled before giving up on a pole.
    pub fn eval_at(&self, var: Var, value: &RationalFn) -> Result<RationalFn, CoeffError> {
        let pole = || CoeffError::PoleAtPoint {
            var: var.name(),
            value: value.to_string(),
        };
        let binding = [(var, value.clone())];
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        loop {
            let (n1, d1) = num.substitute_parts(&binding);
            let (n2, d2) = den.substitute_parts(&binding);
            if !n2.is_zero() {
                let out = RationalFn::new(&n1 * &d2, &d1 * &n2).map_err(|_| pole())?;
                return Ok(out);
            }
            if !n1.is_zero() || value.contains_var(var) {
                return Err(pole());
            }
            // Both vanish: cancel one factor (den(value)*var - num(value)).
            let factor = &(&value.den * &LaurentPoly::var(var)) - &value.num;
            match (num.div_exact(&factor), den.div_exact(&factor)) {
                (Some(a), Some(b)) => {
                    num = a;
                    den = b;
                }
                _ => return Err(pole()),
            }
        }
    }

    /// Lowest terms. Arithmetic only cancels monomials, integer content and
    /// exact quotients; rendering goes through this.
    pub fn reduced(&self) -> RationalFn {
        if self.den.is_monomial() {
            return self.clone();
        }
        let g = self.num.gcd(&self.den);
        if g.is_constant() {
            return self.clone();
        }
        RationalFn::normalized(
            self.num.div_exact(&g).expect("gcd divides"),
            self.den.div_exact(&g).expect("gcd divides"),
        )
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &RationalFn) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for RationalFn {}

impl Default for RationalFn {
    fn default() -> Self {
        RationalFn::zero()
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl From<i64> for RationalFn {
    fn from(c: i64) -> Self {
        RationalFn::constant(c)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den.is_one() {
            write!(f, "{}", r.num)
        } else {
            write!(f, "({}) / ({})", r.num, r.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            return RationalFn::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFn::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if let Some(k) = rhs.den.div_exact(&self.den) {
            return RationalFn::normalized(&(&self.num * &k) + &rhs.num, rhs.den.clone());
        }
        if let Some(k) = self.den.div_exact(&rhs.den) {
            return RationalFn::normalized(&self.num + &(&rhs.num * &k), self.den.clone());
        }
        RationalFn::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_poly(&self.num * &rhs.num);
        }
        if rhs.den == self.num && !rhs.den.is_one() {
            return RationalFn::normalized(rhs.num.clone(), self.den.clone());
        }
        if self.den == rhs.num && !self.den.is_one() {
            return RationalFn::normalized(self.num.clone(), rhs.den.clone());
        }
        RationalFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

forward_owned!(RationalFn, Add, add);
forward_owned!(RationalFn, Sub, sub);
forward_owned!(RationalFn, Mul, mul);

impl std::iter::Sum for RationalFn {
    fn sum<I: Iterator<Item = RationalFn>>(iter: I) -> RationalFn {
        iter.fold(RationalFn::zero(), |a, b| &a + &b)
    }
}

/// Shorthand used throughout the crate.
pub fn q() -> RationalFn {
    RationalFn::var(Var::Q)
}

pub fn z() -> RationalFn {
    RationalFn::var(Var::Z)
}

/// `q - 1`.
pub fn q_minus_one() -> RationalFn {
    &q() - &RationalFn::one()
}

/// `q^{-1}`.
pub fn q_inv() -> RationalFn {
    RationalFn::var_pow(Var::Q, -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> RationalFn {
        RationalFn::var(x)
    }

    fn c(k: i64) -> RationalFn {
        RationalFn::constant(k)
    }

    #[test]
    fn inverse_of_q() {
        let qi = v(Var::Q).inv().unwrap();
        assert_eq!(qi.to_string(), "1*q^-1");
        assert!((&v(Var::Q) * &qi).is_one());
    }

    #[test]
    fn q_minus_one_plus_one() {
        assert_eq!(&q_minus_one() + &c(1), v(Var::Q));
    }

    #[test]
    fn congruent_fractions_are_equal() {
        let q = v(Var::Q);
        let a = RationalFn::new(
            (&q * &q - &c(1)).numer().clone(),
            (&q - &c(1)).numer().clone(),
        )
        .unwrap();
        assert_eq!(a, &q + &c(1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(RationalFn::zero().inv(), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn substitution_examples() {
        let s = v(Var::S);
        let vv = v(Var::V);
        let s2 = &s * &s;
        let zval = (&s2 - &c(1)).div(&(&c(1) - &(&s2 * &(&vv * &vv)))).unwrap();
        let got = v(Var::Z).substitute(&[(Var::Z, zval.clone())]).unwrap();
        assert_eq!(got, zval);
        let got = v(Var::Q).substitute(&[(Var::Q, s2.clone())]).unwrap();
        assert_eq!(got, s2);
        // y = (z - q + 1)/(q z) becomes v^2.
        let y = (&(&v(Var::Z) - &v(Var::Q)) + &c(1))
            .div(&(&v(Var::Q) * &v(Var::Z)))
            .unwrap();
        let got = y.substitute(&[(Var::Q, s2), (Var::Z, zval)]).unwrap();
        assert_eq!(got, &vv * &vv);
    }

    #[test]
    fn eval_examples() {
        let q = v(Var::Q);
        let z = v(Var::Z);
        let e = &(&q_minus_one() * &z) + &q;
        assert_eq!(e.eval_at(Var::Z, &c(0)).unwrap(), q);
        assert!(z.eval_at(Var::Z, &c(0)).unwrap().is_zero());
        let pole = q.div(&z).unwrap().eval_at(Var::Z, &c(0));
        assert!(matches!(pole, Err(CoeffError::PoleAtPoint { .. })));
    }

    #[test]
    fn eval_cancels_removable_factor() {
        let z = v(Var::Z);
        let zm1 = &z - &c(1);
        let r = RationalFn::new(
            (&zm1 * &(&z + &c(3))).numer().clone(),
            (&zm1 * &(&z + &c(1))).numer().clone(),
        )
        .unwrap();
        assert_eq!(
            r.eval_at(Var::Z, &c(1)).unwrap(),
            RationalFn::ratio(2, 1).unwrap()
        );
    }

    #[test]
    fn exact_division() {
        let s = LaurentPoly::var(Var::S);
        let t = LaurentPoly::var(Var::T);
        let a = &(&s * &s) - &LaurentPoly::one();
        let b = &(&t * &s) + &LaurentPoly::var_pow(Var::S, -3);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
    }

    #[test]
    fn rendering_is_ascending_from_last_variable() {
        let t = LaurentPoly::var(Var::T);
        let x = LaurentPoly::var(Var::X);
        let p = &(&t.pow(2).scale(&BigInt::from(2)) - &t.pow(4)) + &(&t.pow(2) * &x.pow(2));
        assert_eq!(p.to_string(), "2*t^2 + -1*t^4 + 1*t^2*x^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::one().to_string(), "1");
    }

    #[test]
    fn fraction_rendering_keeps_den_positive() {
        let q = v(Var::Q);
        let r = c(1).div(&(&c(1) - &q)).unwrap();
        assert_eq!(r.to_string(), "(-1) / (-1 + 1*q)");
    }

    #[test]
    fn var_registry_names() {
        assert_eq!(VarRegistry::NAMES.len(), NVARS);
        for v in Var::ALL {
            assert_eq!(Var::from_name(v.name()), Some(v));
        }
    }

    #[test]
    fn gcd_of_products() {
        let q = LaurentPoly::var(Var::Q);
        let z = LaurentPoly::var(Var::Z);
        let one = LaurentPoly::one();
        let f = &(&q * &z) - &one;
        let g = &q + &(&z * &z);
        let h = &(&q * &q) - &z;
        let a = &(&f * &g).scale(&6.into()) * &LaurentPoly::var_pow(Var::Q, -3);
        let b = &(&f * &h).scale(&(-4).into());
        assert_eq!(a.gcd(b), f.scale(&2.into()));
        assert_eq!(g.gcd(&h), one);
        assert_eq!(LaurentPoly::zero().gcd(&g), g);
    }

    #[test]
    fn rendering_uses_lowest_terms() {
        let s = LaurentPoly::var(Var::S);
        let v = LaurentPoly::var(Var::V);
        let k = &(&s * &s) - &LaurentPoly::one();
        let a = RationalFn::new(v.clone(), &(&s * &v) + &LaurentPoly::one()).unwrap();
        let b = RationalFn::new(&v * &k, &(&(&s * &v) + &LaurentPoly::one()) * &k).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(b.to_string(), "(1*v) / (1 + 1*s*v)");
    }
}
