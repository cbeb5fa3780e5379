//! Property and identity suites behind `shecke verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::braid::{parse, random_markov_walk, random_word, BraidWord, Sign};
use crate::coeffs::{q, q_minus_one, z, RationalFn, Var};
use crate::hecke::{self, HeckeElem};
use crate::invariant::{self, Flavour};
use crate::singular::{self, probe_zero, ProbeOutcome, WordSum};
use crate::traces::{self, factorial, MarkovTrace};

pub const SUITES: [&str; 7] = [
    "skein",
    "desing",
    "markov",
    "lemmas",
    "independence",
    "traces",
    "universality",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (expected one of: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    VerifiedExactly,
    VerifiedSyntactically,
    ProbePassed,
    ProbeFailed,
}

impl Status {
    pub fn ok(self) -> bool {
        !matches!(self, Status::Fail | Status::ProbeFailed)
    }

    fn from_bool(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::VerifiedExactly => "VerifiedExactly",
            Status::VerifiedSyntactically => "VerifiedSyntactically",
            Status::ProbePassed => "ProbePassed",
            Status::ProbeFailed => "ProbeFailed",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.cases.push(CaseReport {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(name, Status::from_bool(ok), detail);
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status.ok())
    }

    pub fn passed_count(&self) -> usize {
        self.cases.iter().filter(|c| c.status.ok()).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} passed",
            self.suite,
            self.passed_count(),
            self.cases.len()
        )
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            if c.detail.is_empty() {
                writeln!(f, "{}\t{}", c.status, c.name)?;
            } else {
                writeln!(f, "{}\t{}\t{}", c.status, c.name, c.detail)?;
            }
        }
        write!(f, "{}", self.summary())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Maximum number of singular points in random words.
    pub d: usize,
    /// Maximum strand count of random words.
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            d: 2,
            n: 4,
            seed: 1,
            trials: 30,
        }
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    Ok(match name {
        "skein" => skein_suite(opts),
        "desing" => desing_suite(opts),
        "markov" => markov_suite(opts),
        "lemmas" => lemma_suite(opts),
        "independence" => independence_suite(opts),
        "traces" => trace_suite(opts),
        "universality" => universality_suite(opts),
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    })
}

/// Random word with at most `max_d` singular points on 2..=`max_n` strands.
pub fn sample_word(rng: &mut ChaCha8Rng, max_d: usize, max_n: usize, max_len: usize) -> BraidWord {
    let n = rng.random_range(2..=max_n.max(2));
    let d = rng.random_range(0..=max_d);
    let len = rng.random_range(d..=max_len.max(d));
    random_word(rng, n, len, d)
}

pub fn skein_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("skein");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let w = sample_word(&mut rng, opts.d, opts.n, 5);
        let i = rng.random_range(1..w.strands());
        let res = invariant::skein_check(&w, i, Flavour::Resolution).unwrap_or(false);
        let raw = invariant::skein_check(&w, i, Flavour::Raw).unwrap_or(false);
        rep.check(format!("skein [{}] i={i}", w.format()), res && raw, "");
    }
    rep
}

pub fn desing_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("desing");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let w = sample_word(&mut rng, opts.d.saturating_sub(1), opts.n, 5);
        let i = rng.random_range(1..w.strands());
        let res = invariant::desing_check(&w, i, Flavour::Resolution).unwrap_or(false);
        let raw = invariant::desing_check(&w, i, Flavour::Raw).unwrap_or(false);
        rep.check(format!("desing [{}] i={i}", w.format()), res && raw, "");
    }
    rep
}

pub fn markov_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("markov");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let w = sample_word(&mut rng, opts.d, opts.n, 5);
        let steps = rng.random_range(1..=6);
        let v = random_markov_walk(&w, steps, rng.random());
        let same = invariant::invariant_raw(&w) == invariant::invariant_raw(&v);
        rep.check(format!("[{}] ~ [{}]", w.format(), v.format()), same, "");
    }
    rep
}

/// The exact Hecke algebra identities, in `H(B_n)` for `n >= 4` where needed.
pub fn hecke_identities(n: usize) -> Vec<(String, bool)> {
    let n4 = n.max(4);
    let mut out = Vec::new();
    let b = hecke::b_elem(3, 1, 2).expect("valid indices");
    let bi = hecke::b_inverse(3, 1, 2).expect("valid indices");
    out.push((
        "B12 * B12^-1 = 1 in H(B3)".to_string(),
        &b * &bi == HeckeElem::identity(3) && &bi * &b == HeckeElem::identity(3),
    ));
    let s = |i| HeckeElem::generator(n4, i).expect("valid index");
    let diff = &s(1) - &s(3);
    let qp1 = &q() + &RationalFn::one();
    let c13 = hecke::c_elem(n4, 1, 3).expect("valid indices");
    out.push((
        format!("(s1 - s3)^2 = (q+1)^2 - C13 in H(B{n4})"),
        &diff * &diff == &HeckeElem::scalar(n4, qp1.pow(2).unwrap()) - &c13,
    ));
    let om = hecke::omega0(n4).expect("n >= 4");
    let s1om = &s(1) * &om;
    let inner = &(&(&s1om.scale(&q()) + &(&om * &s(3)).scale(&q()))
        + &(&s1om * &s(3)).scale(&q_minus_one()))
        - &(&(&s1om * &s(3)) * &s(2));
    let fact =
        (&inner * &(&s(1) - &HeckeElem::scalar(n4, q_minus_one()))).scale(&q().pow(-2).unwrap());
    out.push((
        format!("C13 factorization through omega0 in H(B{n4})"),
        fact == c13,
    ));
    let d0 = hecke::delta0(2).expect("n >= 2");
    let zs = &HeckeElem::scalar(2, z()) - &HeckeElem::generator(2, 1).unwrap();
    out.push((
        "delta0 (z - s1) = (z - s1) delta0 = 1 in H(B2)".to_string(),
        &d0 * &zs == HeckeElem::identity(2) && &zs * &d0 == HeckeElem::identity(2),
    ));
    out
}

pub fn lemma_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("lemmas");
    for (name, ok) in hecke_identities(opts.n) {
        rep.push(
            name,
            if ok {
                Status::VerifiedExactly
            } else {
                Status::Fail
            },
            "",
        );
    }
    let trials = opts.trials.max(20);
    for (k, id) in singular::identity_suite().into_iter().enumerate() {
        let syntactic = id.expr.rewrite().is_zero();
        let probe = probe_zero(&id.expr, trials, opts.seed.wrapping_add(k as u64));
        let (status, detail) = match probe {
            Ok(ProbeOutcome::Pass { probes }) if syntactic => (
                Status::VerifiedSyntactically,
                format!("rewrites to 0; {probes} probes vanish"),
            ),
            Ok(ProbeOutcome::Pass { probes }) => (
                Status::ProbePassed,
                format!("spanning coordinates inconclusive; {probes} probes vanish"),
            ),
            Ok(ProbeOutcome::Fail {
                gamma,
                delta,
                k,
                value,
            }) => (
                Status::ProbeFailed,
                format!("T[{k}] of [{gamma}] expr [{delta}] = {value}"),
            ),
            Err(e) => (Status::ProbeFailed, e.to_string()),
        };
        rep.push(id.name, status, detail);
    }
    rep
}

/// `(d-a)! a! q^a` on the diagonal, zero elsewhere, at `z = 0`.
pub fn independence_diagonal_ok(d: usize) -> (bool, Vec<RationalFn>, RationalFn) {
    let m = traces::independence_matrix(d);
    let at0: Vec<Vec<RationalFn>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    e.eval_at(Var::Z, &RationalFn::zero())
                        .expect("polynomial in z")
                })
                .collect()
        })
        .collect();
    let mut ok = true;
    for (a, row) in at0.iter().enumerate() {
        for (b, e) in row.iter().enumerate() {
            let expect = if a == b {
                q().pow(a as i32)
                    .unwrap()
                    .scale_int(factorial(d - a) * factorial(a))
            } else {
                RationalFn::zero()
            };
            ok &= *e == expect;
        }
    }
    let diag = (0..=d).map(|a| at0[a][a].clone()).collect();
    let det = traces::determinant(&at0);
    (ok && !det.is_zero(), diag, det)
}

pub fn independence_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("independence");
    for d in 0..=opts.d {
        let (ok, diag, det) = independence_diagonal_ok(d);
        let diag: Vec<String> = diag.iter().map(|e| e.to_string()).collect();
        rep.check(
            format!("d={d} diagonal at z=0"),
            ok,
            format!("[{}]; det = {det}", diag.join(", ")),
        );
    }
    rep
}

fn tau_word(n: usize, text: &str) -> WordSum {
    WordSum::word(parse(text, Some(n)).expect("valid word"))
}

/// Trace-level identities among two-generator singular words.
pub fn class_identities(d: usize) -> Vec<(String, WordSum, WordSum)> {
    let mut out = Vec::new();
    let qm1 = q_minus_one();
    for a in 1..d {
        let b = d - a;
        let base = format!("t1^{a} t2^{b}");
        let td = tau_word(2, &format!("t1^{d}"));
        let tds1 = tau_word(2, &format!("t1^{d} s1"));
        out.push((
            format!("[{base} s1 s2 s1] = z(q-1)[t1^{d} s1] + zq[t1^{d}]"),
            tau_word(3, &format!("{base} s1 s2 s1")),
            &tds1.scale(&(&z() * &qm1)) + &td.scale(&(&z() * &q())),
        ));
        out.push((
            format!("[{base} s1 s2] = z[t1^{d} s1]"),
            tau_word(3, &format!("{base} s1 s2")),
            tds1.scale(&z()),
        ));
        let bsum = &(&tau_word(3, &format!("{base} s1")) + &tau_word(3, &format!("{base} s2")))
            - &tau_word(3, &base).scale(&qm1);
        out.push((
            format!("[{base} B12] = [t1^{d} (s1 + z - (q-1))]"),
            bsum,
            &(&tds1 + &td.scale(&z())) - &td.scale(&qm1),
        ));
        out.push((
            format!("[{base}] = [t1^{b} t2^{a}]"),
            tau_word(3, &base),
            tau_word(3, &format!("t1^{b} t2^{a}")),
        ));
    }
    out
}

pub fn trace_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("traces");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let d = rng.random_range(0..=opts.d);
        let n = rng.random_range(2..=opts.n.max(2));
        let len = rng.random_range(d..=8.max(d));
        let w = random_word(&mut rng, n, len, d);
        let v = traces::trace_vector(&w);
        let cut = rng.random_range(0..=w.len());
        let rotated = BraidWord::new(
            n,
            w.letters()[cut..]
                .iter()
                .chain(&w.letters()[..cut])
                .copied()
                .collect(),
        )
        .expect("same strands");
        let sym = traces::trace_vector(&rotated) == v;
        let up = traces::trace_vector(&w.with_strands(n + 1).expect("more strands")) == v;
        let st = traces::trace_vector(&w.markov_stabilize(Sign::Plus));
        let zrule = st.iter().zip(&v).all(|(a, b)| *a == &z() * b);
        let mut routes = true;
        for (k, vk) in v.iter().enumerate() {
            let rec = traces::basis_trace_recursive(k, &w).expect("k in range");
            let alt = traces::basis_trace_alt(k, &w).expect("k in range");
            routes &= rec == *vk && alt == *vk;
        }
        rep.check(
            format!("[{}]", w.format()),
            sym && up && zrule && routes,
            format!("symmetry={sym} stability={up} z-rule={zrule} routes={routes}"),
        );
    }
    for t in 0..opts.trials.min(20) {
        let d = 2 + (t % 2).min(opts.d.saturating_sub(1));
        let n = rng.random_range(2..=opts.n.max(2));
        let len = d + rng.random_range(0..4);
        let w = random_word(&mut rng, n, len, d);
        let base = MarkovTrace::Basis {
            k: rng.random_range(0..=d - 2),
            d: d - 2,
        };
        let (e, m) = (rng.random_range(0..2u8), rng.random_range(0..2u8));
        let lhs = MarkovTrace::phi(e, MarkovTrace::phi(m, base.clone()));
        let rhs = MarkovTrace::phi(m, MarkovTrace::phi(e, base));
        let ok = lhs.eval(&w).ok() == rhs.eval(&w).ok();
        rep.check(
            format!("phi commutation ({e},{m}) on [{}]", w.format()),
            ok,
            "",
        );
    }
    for d in 2..=opts.d.max(3) {
        for (name, lhs, rhs) in class_identities(d) {
            let ok = traces::sums_trace_equal(&lhs, &rhs).unwrap_or(false);
            rep.check(name, ok, "");
        }
    }
    rep
}

pub fn universality_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("universality");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let w1 = sample_word(&mut rng, opts.d, opts.n.min(3), 4);
        let w2 = match rng.random_range(0..3) {
            0 => random_markov_walk(&w1, rng.random_range(1..4), rng.random()),
            1 => {
                let mut v = w1.clone();
                if !v.is_empty() {
                    v = v.rotate();
                }
                v
            }
            _ => {
                let n = rng.random_range(2..=opts.n.clamp(2, 3));
                let len = w1.degree() + rng.random_range(0..4);
                random_word(&mut rng, n, len, w1.degree())
            }
        };
        let hat = invariant::invariant_raw(&w1) == invariant::invariant_raw(&w2);
        let b1 = invariant::basis_invariants(&w1).expect("exact");
        let b2 = invariant::basis_invariants(&w2).expect("exact");
        let basis = b1 == b2;
        let recon = invariant::from_basis_invariants(&b1) == invariant::invariant_raw(&w1);
        rep.check(
            format!("[{}] vs [{}]", w1.format(), w2.format()),
            hat == basis && recon,
            format!("invariant equal={hat} basis equal={basis}"),
        );
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions {
            d: 2,
            n: 3,
            seed: 7,
            trials: 6,
        }
    }

    #[test]
    fn every_suite_passes_small() {
        for name in SUITES {
            let rep = run_suite(name, &small()).unwrap();
            assert!(rep.passed(), "{rep}");
            assert!(!rep.cases.is_empty());
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &small()).is_err());
    }

    #[test]
    fn independence_diagonal_up_to_three() {
        for d in 0..=3 {
            assert!(independence_diagonal_ok(d).0, "d={d}");
        }
    }

    #[test]
    fn class_identities_hold() {
        for d in 2..=3 {
            for (name, l, r) in class_identities(d) {
                assert!(traces::sums_trace_equal(&l, &r).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn broken_class_identity_detected() {
        let (_, l, r) = class_identities(2).remove(1);
        assert!(!traces::sums_trace_equal(&l, &r.scale(&q())).unwrap());
    }
}
