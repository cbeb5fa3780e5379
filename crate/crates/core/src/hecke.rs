//! The Hecke algebra H(B_n) with the quadratic relation
//! `σ_k^2 = (q-1)σ_k + q`, its standard basis, and the Ocneanu trace.
//!
//! Basis elements are indexed by permutations of `{0, .., n-1}` in one-line
//! form. A [`BasisWord`] is the same element seen through its descriptor
//! `(r_2, .., r_n)`, i.e. the normal form `u_2 u_3 .. u_n` with
//! `u_k = σ_{k-1} σ_{k-2} .. σ_{k-r_k}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{LazyLock, RwLock};

use thiserror::Error;

use crate::braid::{BraidWord, Letter};
use crate::coeffs::{q, q_inv, q_minus_one, z, RationalFn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("singular letter {0} has no image in the Hecke algebra")]
    SingularLetter(Letter),
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("index constraint violated: {0}")]
    IndexConstraint(String),
}

pub type Perm = Vec<u8>;

/// Descriptor `(r_2, .., r_n)` with `0 <= r_k <= k-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisWord {
    desc: Vec<u8>,
}

impl BasisWord {
    pub fn new(desc: Vec<u8>) -> Option<Self> {
        for (k, &r) in desc.iter().enumerate() {
            if r as usize > k + 1 {
                return None;
            }
        }
        Some(BasisWord { desc })
    }

    pub fn identity(n: usize) -> Self {
        BasisWord {
            desc: vec![0; n.saturating_sub(1)],
        }
    }

    pub fn strands(&self) -> usize {
        self.desc.len() + 1
    }

    pub fn descriptor(&self) -> &[u8] {
        &self.desc
    }

    pub fn length(&self) -> usize {
        self.desc.iter().map(|&r| r as usize).sum()
    }

    /// Generator indices (1-based) of the normal form, left to right.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length());
        for (slot, &r) in self.desc.iter().enumerate() {
            let k = slot + 2;
            for m in 1..=r as usize {
                out.push(k - m);
            }
        }
        out
    }

    pub fn to_word(&self) -> BraidWord {
        let letters = self.generators().into_iter().map(Letter::Pos).collect();
        BraidWord::new(self.strands(), letters).expect("indices in range")
    }

    pub fn permutation(&self) -> Perm {
        let mut p: Perm = (0..self.strands() as u8).collect();
        for i in self.generators() {
            p.swap(i - 1, i);
        }
        p
    }

    pub fn from_permutation(p: &[u8]) -> Self {
        let n = p.len();
        let mut w = p.to_vec();
        let mut desc = vec![0u8; n.saturating_sub(1)];
        for k in (2..=n).rev() {
            let pos = w.iter().position(|&v| v as usize == k - 1).unwrap();
            desc[k - 2] = (k - 1 - pos) as u8;
            w.remove(pos);
        }
        BasisWord { desc }
    }
}

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generators();
        if g.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = g.iter().map(|i| format!("s{i}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// All `n!` basis words, in descriptor order.
pub fn basis(n: usize) -> Vec<BasisWord> {
    let mut out = vec![Vec::new()];
    for k in 2..=n {
        let mut next = Vec::with_capacity(out.len() * k);
        for d in &out {
            for r in 0..k as u8 {
                let mut d2: Vec<u8> = d.clone();
                d2.push(r);
                next.push(d2);
            }
        }
        out = next;
    }
    out.into_iter().map(|desc| BasisWord { desc }).collect()
}

/// Linear combination of basis elements of H(B_n).
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElem {
    n: usize,
    terms: BTreeMap<Perm, RationalFn>,
}

fn check_index(n: usize, i: usize) -> Result<(), HeckeError> {
    if i == 0 || i >= n {
        return Err(HeckeError::IndexOutOfRange {
            index: i,
            strands: n,
        });
    }
    Ok(())
}

impl HeckeElem {
    pub fn zero(n: usize) -> Self {
        HeckeElem {
            n: n.max(1),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        HeckeElem::scalar(n, RationalFn::one())
    }

    pub fn scalar(n: usize, c: RationalFn) -> Self {
        let n = n.max(1);
        let mut e = HeckeElem::zero(n);
        e.add_term((0..n as u8).collect(), c);
        e
    }

    pub fn basis_element(b: &BasisWord) -> Self {
        let mut e = HeckeElem::zero(b.strands());
        e.add_term(b.permutation(), RationalFn::one());
        e
    }

    /// The generator σ_i.
    pub fn generator(n: usize, i: usize) -> Result<Self, HeckeError> {
        check_index(n, i)?;
        HeckeElem::identity(n).right_mul_letter(Letter::Pos(i))
    }

    /// Image of a non-singular word.
    pub fn from_word(w: &BraidWord) -> Result<Self, HeckeError> {
        let mut e = HeckeElem::identity(w.strands());
        for &l in w.letters() {
            e = e.right_mul_letter(l)?;
        }
        Ok(e)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates, in descriptor order.
    pub fn terms(&self) -> Vec<(BasisWord, RationalFn)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(p, c)| (BasisWord::from_permutation(p), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn perm_terms(&self) -> impl Iterator<Item = (&Perm, &RationalFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasisWord) -> RationalFn {
        self.terms
            .get(&b.permutation())
            .cloned()
            .unwrap_or_else(RationalFn::zero)
    }

    fn add_term(&mut self, p: Perm, c: RationalFn) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &RationalFn) -> HeckeElem {
        if c.is_zero() {
            return HeckeElem::zero(self.n);
        }
        HeckeElem {
            n: self.n,
            terms: self.terms.iter().map(|(p, a)| (p.clone(), a * c)).collect(),
        }
    }

    /// Same element viewed in H(B_m), `m >= n`.
    pub fn embed(&self, m: usize) -> HeckeElem {
        assert!(m >= self.n, "cannot embed into fewer strands");
        HeckeElem {
            n: m,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| {
                    let mut p2 = p.clone();
                    p2.extend(self.n as u8..m as u8);
                    (p2, c.clone())
                })
                .collect(),
        }
    }

    /// `self · σ_i` via the length rule on permutations.
    pub fn right_mul_gen(&self, i: usize) -> HeckeElem {
        let mut out = HeckeElem::zero(self.n);
        for (p, c) in &self.terms {
            let mut ps = p.clone();
            ps.swap(i - 1, i);
            if p[i - 1] < p[i] {
                out.add_term(ps, c.clone());
            } else {
                out.add_term(p.clone(), c * &q_minus_one());
                out.add_term(ps, c * &q());
            }
        }
        out
    }

    /// `σ_i · self`.
    pub fn left_mul_gen(&self, i: usize) -> HeckeElem {
        let (a, b) = ((i - 1) as u8, i as u8);
        let mut out = HeckeElem::zero(self.n);
        for (p, c) in &self.terms {
            let ps: Perm = p
                .iter()
                .map(|&v| {
                    if v == a {
                        b
                    } else if v == b {
                        a
                    } else {
                        v
                    }
                })
                .collect();
            let pa = p.iter().position(|&v| v == a).unwrap();
            let pb = p.iter().position(|&v| v == b).unwrap();
            if pa < pb {
                out.add_term(ps, c.clone());
            } else {
                out.add_term(p.clone(), c * &q_minus_one());
                out.add_term(ps, c * &q());
            }
        }
        out
    }

    fn inverse_from(&self, times_gen: HeckeElem) -> HeckeElem {
        // σ^{-1} = q^{-1} σ - q^{-1}(q-1)
        let a = times_gen.scale(&q_inv());
        let b = self.scale(&(&q_inv() * &q_minus_one()));
        &a - &b
    }

    pub fn right_mul_letter(&self, l: Letter) -> Result<HeckeElem, HeckeError> {
        check_index(self.n, l.index())?;
        match l {
            Letter::Pos(i) => Ok(self.right_mul_gen(i)),
            Letter::Neg(i) => Ok(self.inverse_from(self.right_mul_gen(i))),
            Letter::Sing(_) => Err(HeckeError::SingularLetter(l)),
        }
    }

    pub fn left_mul_letter(&self, l: Letter) -> Result<HeckeElem, HeckeError> {
        check_index(self.n, l.index())?;
        match l {
            Letter::Pos(i) => Ok(self.left_mul_gen(i)),
            Letter::Neg(i) => Ok(self.inverse_from(self.left_mul_gen(i))),
            Letter::Sing(_) => Err(HeckeError::SingularLetter(l)),
        }
    }

    pub fn try_add(&self, other: &HeckeElem) -> Result<HeckeElem, HeckeError> {
        let n = self.n.max(other.n);
        let (mut out, rhs) = (self.embed(n), other.embed(n));
        for (p, c) in rhs.terms {
            out.add_term(p, c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &HeckeElem) -> Result<HeckeElem, HeckeError> {
        if self.n != other.n {
            return Err(HeckeError::StrandMismatch(self.n, other.n));
        }
        let mut out = HeckeElem::zero(self.n);
        for (p, c) in &other.terms {
            let mut part = self.scale(c);
            for i in BasisWord::from_permutation(p).generators() {
                part = part.right_mul_gen(i);
            }
            for (pp, cc) in part.terms {
                out.add_term(pp, cc);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> HeckeElem {
        let mut out = HeckeElem::identity(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The Ocneanu trace.
    pub fn ocneanu_trace(&self) -> RationalFn {
        self.terms.iter().map(|(p, c)| c * &perm_trace(p)).sum()
    }
}

impl fmt::Display for HeckeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms = self.terms();
        terms.reverse();
        for (k, (b, c)) in terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let ct = c.to_string();
            if c.is_laurent() && c.numer().len() == 1 {
                write!(f, "{ct} * {b}")?;
            } else {
                write!(f, "({ct}) * {b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HeckeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}[{}]", self.n, self)
    }
}

impl Add for &HeckeElem {
    type Output = HeckeElem;
    fn add(self, rhs: &HeckeElem) -> HeckeElem {
        self.try_add(rhs).expect("addition")
    }
}

impl Neg for &HeckeElem {
    type Output = HeckeElem;
    fn neg(self) -> HeckeElem {
        self.scale(&RationalFn::constant(-1))
    }
}

impl Sub for &HeckeElem {
    type Output = HeckeElem;
    fn sub(self, rhs: &HeckeElem) -> HeckeElem {
        self + &(-rhs)
    }
}

/// Panics on a strand mismatch; use [`HeckeElem::try_mul`] to handle it.
impl Mul for &HeckeElem {
    type Output = HeckeElem;
    fn mul(self, rhs: &HeckeElem) -> HeckeElem {
        self.try_mul(rhs).expect("strand counts must agree")
    }
}

impl Add for HeckeElem {
    type Output = HeckeElem;
    fn add(self, rhs: HeckeElem) -> HeckeElem {
        &self + &rhs
    }
}

impl Sub for HeckeElem {
    type Output = HeckeElem;
    fn sub(self, rhs: HeckeElem) -> HeckeElem {
        &self - &rhs
    }
}

impl Mul for HeckeElem {
    type Output = HeckeElem;
    fn mul(self, rhs: HeckeElem) -> HeckeElem {
        &self * &rhs
    }
}

static CACHE_ENABLED: AtomicBool = AtomicBool::new(true);

static PERM_TRACES: LazyLock<RwLock<HashMap<Perm, RationalFn>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

static WORD_TRACES: LazyLock<RwLock<HashMap<Vec<Letter>, RationalFn>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Turns the process-wide trace memo on or off. Results do not depend on it.
pub fn set_trace_cache(enabled: bool) {
    CACHE_ENABLED.store(enabled, Ordering::SeqCst);
}

pub fn trace_cache_enabled() -> bool {
    CACHE_ENABLED.load(Ordering::SeqCst)
}

pub fn clear_trace_cache() {
    PERM_TRACES.write().unwrap().clear();
    WORD_TRACES.write().unwrap().clear();
}

/// Ocneanu trace of the basis element `T_p`.
pub fn perm_trace(p: &[u8]) -> RationalFn {
    let mut len = p.len();
    while len > 0 && p[len - 1] as usize == len - 1 {
        len -= 1;
    }
    let p = &p[..len];
    if p.is_empty() {
        return RationalFn::one();
    }
    let cached = trace_cache_enabled();
    if cached {
        if let Some(v) = PERM_TRACES.read().unwrap().get(p) {
            return v.clone();
        }
    }
    let n = p.len();
    let pos = p.iter().position(|&v| v as usize == n - 1).unwrap();
    let m = n - 1 - pos;
    // T_p = T_{p'} σ_{n-1} σ_{n-2} .. σ_{n-m} with p' in S_{n-1}
    let mut rest: Perm = p.to_vec();
    rest.remove(pos);
    let mut e = HeckeElem {
        n: n - 1,
        terms: BTreeMap::from([(rest, RationalFn::one())]),
    };
    for i in (n - m..n - 1).rev() {
        e = e.right_mul_gen(i);
    }
    let value = &z() * &e.ocneanu_trace();
    if cached {
        PERM_TRACES
            .write()
            .unwrap()
            .insert(p.to_vec(), value.clone());
    }
    value
}

/// Ocneanu trace of a non-singular word, memoized on the letter sequence.
pub fn word_trace(w: &BraidWord) -> Result<RationalFn, HeckeError> {
    let cached = trace_cache_enabled();
    if cached {
        if let Some(v) = WORD_TRACES.read().unwrap().get(w.letters()) {
            return Ok(v.clone());
        }
    }
    let value = HeckeElem::from_word(w)?.ocneanu_trace();
    if cached {
        WORD_TRACES
            .write()
            .unwrap()
            .insert(w.letters().to_vec(), value.clone());
    }
    Ok(value)
}

fn gen(n: usize, i: usize) -> HeckeElem {
    HeckeElem::generator(n, i).expect("index checked by caller")
}

fn scalar(n: usize, c: RationalFn) -> HeckeElem {
    HeckeElem::scalar(n, c)
}

fn check_adjacent(n: usize, i: usize, j: usize) -> Result<(), HeckeError> {
    check_index(n, i)?;
    check_index(n, j)?;
    if i.abs_diff(j) != 1 {
        return Err(HeckeError::IndexConstraint(format!(
            "|{i} - {j}| must be 1"
        )));
    }
    Ok(())
}

/// `B_ij = σ_i + σ_j - (q-1)` for adjacent `i, j`.
pub fn b_elem(n: usize, i: usize, j: usize) -> Result<HeckeElem, HeckeError> {
    check_adjacent(n, i, j)?;
    Ok(&(&gen(n, i) + &gen(n, j)) - &scalar(n, q_minus_one()))
}

/// Closed form of `B_ij^{-1}`.
pub fn b_inverse(n: usize, i: usize, j: usize) -> Result<HeckeElem, HeckeError> {
    check_adjacent(n, i, j)?;
    let (si, sj) = (gen(n, i), gen(n, j));
    let qq = q();
    let qm1 = q_minus_one();
    let two_q = qq.scale_int(2);
    let inner = &(&(&(&(&scalar(n, &qq * &qm1) - &si.scale(&two_q)) - &sj.scale(&two_q))
        - &(&si * &sj).scale(&qm1))
        - &(&sj * &si).scale(&qm1))
        + &(&(&si * &sj) * &si).scale(&RationalFn::constant(2));
    let qp1 = &qq + &RationalFn::one();
    let factor = -&(&q_inv() * &qp1.pow(-2).expect("q+1 is nonzero"));
    Ok(inner.scale(&factor))
}

/// `C_ij = 2σ_iσ_j - (q-1)σ_i - (q-1)σ_j + q^2 + 1` for `|i-j| >= 2`.
pub fn c_elem(n: usize, i: usize, j: usize) -> Result<HeckeElem, HeckeError> {
    check_index(n, i)?;
    check_index(n, j)?;
    if i.abs_diff(j) < 2 {
        return Err(HeckeError::IndexConstraint(format!(
            "|{i} - {j}| must be at least 2"
        )));
    }
    let (si, sj) = (gen(n, i), gen(n, j));
    let qm1 = q_minus_one();
    let constant = &q().pow(2).unwrap() + &RationalFn::one();
    Ok(
        &(&(&(&si * &sj).scale(&RationalFn::constant(2)) - &si.scale(&qm1)) - &sj.scale(&qm1))
            + &scalar(n, constant),
    )
}

/// `ω_0 = σ_1σ_2 + σ_3σ_2 + σ_1σ_3 - (q-1)(σ_1 + σ_2 + σ_3) + q^2 - q + 1`.
pub fn omega0(n: usize) -> Result<HeckeElem, HeckeError> {
    if n < 4 {
        return Err(HeckeError::IndexConstraint("omega0 needs n >= 4".into()));
    }
    let (s1, s2, s3) = (gen(n, 1), gen(n, 2), gen(n, 3));
    let qm1 = q_minus_one();
    let constant = &(&q().pow(2).unwrap() - &q()) + &RationalFn::one();
    let quad = &(&(&s1 * &s2) + &(&s3 * &s2)) + &(&s1 * &s3);
    let lin = (&(&s1 + &s2) + &s3).scale(&qm1);
    Ok(&(&quad - &lin) + &scalar(n, constant))
}

/// `δ_0 = (z^2 - (q-1)z - q)^{-1} (z - (q-1) + σ_1)`.
pub fn delta0(n: usize) -> Result<HeckeElem, HeckeError> {
    if n < 2 {
        return Err(HeckeError::IndexConstraint("delta0 needs n >= 2".into()));
    }
    let zz = z();
    let den = &(&(&zz * &zz) - &(&q_minus_one() * &zz)) - &q();
    let body = &scalar(n, &zz - &q_minus_one()) + &gen(n, 1);
    Ok(body.scale(&den.inv().expect("nonzero")))
}

/// The named elements available for the given indices.
#[derive(Clone, Debug)]
pub struct NamedElements {
    pub b_ij: Option<HeckeElem>,
    pub b_ij_inverse: Option<HeckeElem>,
    pub c_ij: Option<HeckeElem>,
    pub omega0: Option<HeckeElem>,
    pub delta0: HeckeElem,
}

/// B and its inverse exist for adjacent indices, C for distant ones, ω_0 for
/// `n >= 4`.
pub fn named_elements(n: usize, i: usize, j: usize) -> Result<NamedElements, HeckeError> {
    check_index(n, i)?;
    check_index(n, j)?;
    if i == j {
        return Err(HeckeError::IndexConstraint("i and j must differ".into()));
    }
    let adjacent = i.abs_diff(j) == 1;
    Ok(NamedElements {
        b_ij: adjacent.then(|| b_elem(n, i, j)).transpose()?,
        b_ij_inverse: adjacent.then(|| b_inverse(n, i, j)).transpose()?,
        c_ij: (!adjacent).then(|| c_elem(n, i, j)).transpose()?,
        omega0: (n >= 4).then(|| omega0(n)).transpose()?,
        delta0: delta0(n)?,
    })
}
