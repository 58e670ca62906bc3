//! Independent reference computations for the integration tests.
//!
//! Nothing here calls the engine's algebra or linear algebra: elements are
//! maps from sorted generator words to residues mod a large prime, products
//! are formed by sorting words with explicit transposition signs, and ranks
//! come from plain Gaussian elimination mod p. Ranks over Q are recovered
//! as the maximum over two primes.

#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sullivan_core::dga::SullivanPresentation;
use sullivan_core::gca::{Generator, Monomial, Polynomial};
use sullivan_core::linalg::Q;

const PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

/// (numerator, denominator) and the generator word of one term.
type Term = ((i64, i64), Vec<usize>);

/// A model reduced to generator degrees and the terms of each differential.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub degrees: Vec<u32>,
    diffs: Vec<Vec<Term>>,
}

type Elem = HashMap<Vec<usize>, u64>;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn residue(num: i64, den: i64, p: u64) -> u64 {
    let n = num.rem_euclid(p as i64) as u64;
    let d = den.rem_euclid(p as i64) as u64;
    (n as u128 * pow_mod(d, p - 2, p) as u128 % p as u128) as u64
}

impl Oracle {
    pub fn from_presentation(p: &SullivanPresentation) -> Self {
        let degrees: Vec<u32> = p.generators().iter().map(|g| g.degree).collect();
        let diffs = (0..degrees.len())
            .map(|i| {
                p.differential(i)
                    .terms()
                    .map(|(m, c)| {
                        let word: Vec<usize> = m
                            .exponents()
                            .iter()
                            .enumerate()
                            .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
                            .collect();
                        let num = c.numer().to_i64().unwrap();
                        let den = c.denom().to_i64().unwrap();
                        ((num, den), word)
                    })
                    .collect()
            })
            .collect();
        Oracle { degrees, diffs }
    }

    fn odd(&self, g: usize) -> bool {
        self.degrees[g] % 2 == 1
    }

    /// Sorts a word by bubble sort; returns the sign, or None if an odd
    /// generator repeats.
    fn normalize(&self, mut w: Vec<usize>) -> Option<(bool, Vec<usize>)> {
        let mut negative = false;
        for i in 0..w.len() {
            for j in 0..w.len() - 1 - i {
                if w[j] > w[j + 1] {
                    if self.odd(w[j]) && self.odd(w[j + 1]) {
                        negative = !negative;
                    }
                    w.swap(j, j + 1);
                }
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && self.odd(p[0])) {
            return None;
        }
        Some((negative, w))
    }

    /// All sorted words of the given degree (optionally of a fixed length).
    pub fn basis(&self, degree: u32, length: Option<usize>) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.words(0, degree, &mut cur, &mut out);
        out.retain(|w| length.is_none_or(|l| w.len() == l));
        out
    }

    fn words(&self, start: usize, remaining: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for g in start..self.degrees.len() {
            let d = self.degrees[g];
            if d > remaining {
                continue;
            }
            // odd generators appear at most once: continue after them
            let next = if self.odd(g) { g + 1 } else { g };
            cur.push(g);
            self.words(next, remaining - d, cur, out);
            cur.pop();
        }
    }

    /// d of a sorted word, mod p.
    fn d_word(&self, w: &[usize], p: u64) -> Elem {
        let mut out = Elem::new();
        let mut prefix_degree = 0u32;
        for j in 0..w.len() {
            for ((num, den), image) in &self.diffs[w[j]] {
                let mut word = w[..j].to_vec();
                word.extend(image);
                word.extend(&w[j + 1..]);
                if let Some((neg, sorted)) = self.normalize(word) {
                    let mut c = residue(*num, *den, p);
                    if neg != (prefix_degree % 2 == 1) {
                        c = (p - c) % p;
                    }
                    let e = out.entry(sorted).or_insert(0);
                    *e = (*e + c) % p;
                }
            }
            prefix_degree += self.degrees[w[j]];
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Matrix of d from `src` words to `tgt` words (columns are sources).
    /// Terms landing outside `tgt` are dropped, which is how truncated
    /// quotients are modelled.
    fn matrix(&self, src: &[Vec<usize>], tgt: &[Vec<usize>], p: u64) -> Vec<Vec<u64>> {
        let index: HashMap<&Vec<usize>, usize> =
            tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = vec![vec![0u64; src.len()]; tgt.len()];
        for (j, w) in src.iter().enumerate() {
            for (t, c) in self.d_word(w, p) {
                if let Some(&i) = index.get(&t) {
                    m[i][j] = c;
                }
            }
        }
        m
    }

    pub fn total_dim(&self, n: u32) -> usize {
        let here = self.basis(n, None);
        let up = self.basis(n + 1, None);
        let down = if n == 0 {
            Vec::new()
        } else {
            self.basis(n - 1, None)
        };
        dim_over_primes(|p| {
            here.len() - rank(self.matrix(&here, &up, p), p) - rank(self.matrix(&down, &here, p), p)
        })
    }

    /// dim H^n_k for a differential homogeneous of word length l.
    pub fn bigraded_dim(&self, n: u32, k: usize, l: usize) -> usize {
        let here = self.basis(n, Some(k));
        let up = self.basis(n + 1, Some(k + l - 1));
        let down = if n == 0 || k + 1 < l {
            Vec::new()
        } else {
            self.basis(n - 1, Some(k + 1 - l))
        };
        dim_over_primes(|p| {
            here.len() - rank(self.matrix(&here, &up, p), p) - rank(self.matrix(&down, &here, p), p)
        })
    }

    /// Least n such that some degree-`top` cocycle survives to
    /// ΛV / Λ^{>n}V with nonzero class. Assumes H^top is one-dimensional.
    pub fn toomer(&self, top: u32) -> usize {
        let here = self.basis(top, None);
        let up = self.basis(top + 1, None);
        let below = if top == 0 {
            Vec::new()
        } else {
            self.basis(top - 1, None)
        };
        let longest = here.iter().map(Vec::len).max().unwrap_or(0);
        let p = PRIMES[0];
        let z = kernel(self.matrix(&here, &up, p), here.len(), p);
        for n in 0..=longest {
            let keep: Vec<usize> = (0..here.len()).filter(|&i| here[i].len() <= n).collect();
            let here_n: Vec<Vec<usize>> = keep.iter().map(|&i| here[i].clone()).collect();
            let below_n: Vec<Vec<usize>> = below.iter().filter(|w| w.len() <= n).cloned().collect();
            let b = self.matrix(&below_n, &here_n, p);
            // append the projected cocycles as extra columns
            let mut with_z = b.clone();
            for (row, &i) in with_z.iter_mut().zip(&keep) {
                row.extend(z.iter().map(|zv| zv[i]));
            }
            if rank(with_z, p) > rank(b, p) {
                return n;
            }
        }
        panic!("fundamental class never survives");
    }
}

fn dim_over_primes(f: impl Fn(u64) -> usize) -> usize {
    // rank mod p never exceeds rank over Q, so each prime can only overshoot
    PRIMES.iter().map(|&p| f(p)).min().unwrap()
}

fn rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    let sub = (f as u128 * y as u128 % p as u128) as u64;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Basis of the null space of an m × n matrix mod p.
fn kernel(mut m: Vec<Vec<u64>>, n: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    let sub = (f as u128 * y as u128 % p as u128) as u64;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[row][f]) % p;
            }
            v
        })
        .collect()
}

/// Coefficient of t^n in Π_odd (1 + t^d) / Π_even (1 − t^d).
pub fn poincare_coefficient(degrees: &[u32], n: u32) -> u64 {
    let n = n as usize;
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d % 2 == 1 {
            for i in (d..=n).rev() {
                series[i] += series[i - d];
            }
        } else {
            for i in d..=n {
                series[i] += series[i - d];
            }
        }
    }
    series[n]
}

/// A random model whose d² vanishes by construction: some cocycle
/// generators, then generators whose differentials are polynomials in the
/// cocycles. `pure_length` forces a homogeneous differential of that word
/// length in the even cocycles only.
pub fn random_two_stage(seed: u64, pure_length: Option<u32>) -> SullivanPresentation {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_base = rng.gen_range(1..=3);
    let mut gens: Vec<Generator> = (0..n_base)
        .map(|i| {
            let deg = if pure_length.is_some() {
                [2, 2, 4][rng.gen_range(0..3)]
            } else {
                rng.gen_range(2..=4)
            };
            Generator::new(format!("a{i}"), deg)
        })
        .collect();
    let n_top = rng.gen_range(1..=3);
    for i in 0..n_top {
        let deg = if pure_length.is_some() {
            [3, 5, 7][rng.gen_range(0..3)]
        } else {
            rng.gen_range(3..=7)
        };
        gens.push(Generator::new(format!("b{i}"), deg));
    }
    let n = gens.len();
    let base: Vec<Generator> = gens[..n_base].to_vec();
    let mut diffs = vec![Polynomial::zero(); n_base];
    for g in &gens[n_base..] {
        let mut d = Polynomial::zero();
        for m in base_monomials(&base, g.degree + 1) {
            if let Some(l) = pure_length {
                let even_only = m
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || base[i].degree.is_multiple_of(2));
                if m.iter().sum::<u32>() != l || !even_only {
                    continue;
                }
            } else if m.iter().sum::<u32>() < 2 {
                continue;
            }
            let c: i64 = rng.gen_range(-2..=2);
            if c != 0 {
                let mut full = m.clone();
                full.resize(n, 0);
                d.add_term(Monomial::from_exponents(full), Q::from_integer(c.into()));
            }
        }
        diffs.push(d);
    }
    SullivanPresentation::new(Some(format!("random-{seed}")), gens, diffs).unwrap()
}

/// Exponent vectors over `base` of total degree `t`.
fn base_monomials(base: &[Generator], t: u32) -> Vec<Vec<u32>> {
    fn rec(base: &[Generator], i: usize, t: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == base.len() {
            if t == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = base[i].degree;
        let max = if d % 2 == 1 { 1 } else { t / d };
        for e in 0..=max.min(t / d) {
            cur.push(e);
            rec(base, i + 1, t - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(base, 0, t, &mut Vec::new(), &mut out);
    out
}
