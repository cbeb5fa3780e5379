//! Standalone skein-tree evaluator for closed braids, sharing no code with
//! the library. Polynomials live in `Z[t^±, x^±]` as exponent maps.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

/// Exponents `(t, x)` to integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub BTreeMap<(i32, i32), i64>);

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn mono(c: i64, t: i32, x: i32) -> Self {
        let mut p = Poly::zero();
        p.add_term((t, x), c);
        p
    }

    pub fn one() -> Self {
        Poly::mono(1, 0, 0)
    }

    fn add_term(&mut self, e: (i32, i32), c: i64) {
        let v = self.0.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, *c);
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for ((a, b), c) in &self.0 {
            for ((d, e), f) in &o.0 {
                r.add_term((a + d, b + e), c * f);
            }
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Terms ordered by x exponent, then t exponent, both ascending.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&(i32, i32)> = self.0.keys().collect();
        keys.sort_by_key(|(t, x)| (*x, *t));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|k| {
                let mut s = self.0[k].to_string();
                for (name, e) in [("t", k.0), ("x", k.1)] {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{e}")),
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

/// Signed generator index; `0` never occurs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Cross(i32),
    Double(usize),
}

pub fn parse_word(text: &str) -> Vec<Gen> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        if tok.starts_with("n=") {
            continue;
        }
        let (body, reps) = match tok.split_once('^') {
            Some((b, r)) => (b, r.parse::<usize>().unwrap()),
            None => (tok, 1),
        };
        let (body, inv) = match body.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let idx: usize = body[1..].parse().unwrap();
        let g = match &body[..1] {
            "s" if inv => Gen::Cross(-(idx as i32)),
            "s" => Gen::Cross(idx as i32),
            "t" => Gen::Double(idx),
            other => panic!("bad generator {other}"),
        };
        out.extend(std::iter::repeat_n(g, reps));
    }
    out
}

/// Closure of an `n`-strand unlink: `((t^-1 - t)/x)^(c-1)`.
fn unlink(c: usize) -> Poly {
    let delta = Poly::mono(1, -1, -1).add(&Poly::mono(-1, 1, -1));
    let mut p = Poly::one();
    for _ in 1..c {
        p = p.mul(&delta);
    }
    p
}

/// Index of the first crossing met from below along the traversal, or the
/// component count when the diagram is already descending.
fn first_bad_crossing(word: &[i32], n: usize) -> Result<usize, usize> {
    let mut seen = vec![false; word.len()];
    let mut started = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if started[start] {
            continue;
        }
        components += 1;
        let mut p = start;
        loop {
            started[p] = true;
            for (k, &g) in word.iter().enumerate() {
                let i = g.unsigned_abs() as usize;
                let left = p + 1 == i;
                let right = p == i;
                if !(left || right) {
                    continue;
                }
                // Positive letters carry the left-to-right strand over.
                let over = left == (g > 0);
                if !seen[k] {
                    if !over {
                        return Ok(k);
                    }
                    seen[k] = true;
                }
                p = if left { p + 1 } else { p - 1 };
            }
            if p == start {
                break;
            }
        }
    }
    Err(components)
}

pub struct Oracle {
    memo: HashMap<(Vec<i32>, usize), Poly>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Oracle {
            memo: HashMap::new(),
        }
    }

    /// HOMFLY polynomial with `t^-1 P(L+) - t P(L-) = x P(L0)`, unknot 1.
    pub fn homfly(&mut self, word: &[i32], n: usize) -> Poly {
        if let Some(p) = self.memo.get(&(word.to_vec(), n)) {
            return p.clone();
        }
        let p = match first_bad_crossing(word, n) {
            Err(c) => unlink(c),
            Ok(k) => {
                let mut switched = word.to_vec();
                switched[k] = -switched[k];
                let mut smoothed = word.to_vec();
                smoothed.remove(k);
                let a = self.homfly(&switched, n);
                let b = self.homfly(&smoothed, n);
                if word[k] > 0 {
                    a.mul(&Poly::mono(1, 2, 0))
                        .add(&b.mul(&Poly::mono(1, 1, 1)))
                } else {
                    a.mul(&Poly::mono(1, -2, 0))
                        .add(&b.mul(&Poly::mono(-1, -1, 1)))
                }
            }
        };
        self.memo.insert((word.to_vec(), n), p.clone());
        p
    }

    /// Coefficients of `X^k Y^(d-k)` for `k = 0..=d`: a double point becomes
    /// a positive crossing (weight X) or is smoothed away (weight Y).
    pub fn resolved(&mut self, word: &[Gen], n: usize) -> Vec<Poly> {
        let doubles: Vec<usize> = (0..word.len())
            .filter(|&k| matches!(word[k], Gen::Double(_)))
            .collect();
        let d = doubles.len();
        let mut out = vec![Poly::zero(); d + 1];
        for mask in 0u32..(1 << d) {
            let mut w = Vec::new();
            let mut j = 0;
            for g in word {
                match *g {
                    Gen::Cross(i) => w.push(i),
                    Gen::Double(i) => {
                        if mask >> j & 1 == 1 {
                            w.push(i as i32);
                        }
                        j += 1;
                    }
                }
            }
            let k = mask.count_ones() as usize;
            out[k] = out[k].add(&self.homfly(&w, n));
        }
        out
    }
}
