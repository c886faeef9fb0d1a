//! Independent oracles used by the integration tests. Nothing here calls the
//! ball enumerator or the closed-form expander.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use poincare_core::affine_map::AffineMap;
use poincare_core::cartan_data::AffineCoxeterSystem;
use poincare_core::hecke_module::RationalMatrix;
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// For every element reachable by a word of length ≤ `max_len`, the minimal
/// length and every word of that length representing it. Plain exhaustive
/// search over all words.
pub fn reduced_words(
    system: &AffineCoxeterSystem,
    max_len: usize,
) -> HashMap<AffineMap, Vec<Vec<usize>>> {
    let n = system.generator_count();
    let mut best: HashMap<AffineMap, Vec<Vec<usize>>> = HashMap::new();
    let mut frontier: Vec<(Vec<usize>, AffineMap)> =
        vec![(Vec::new(), AffineMap::identity(system.dim()))];
    best.insert(AffineMap::identity(system.dim()), vec![Vec::new()]);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, map) in &frontier {
            for s in 0..n {
                let mut w = word.clone();
                w.push(s);
                let m = map.compose(system.generator(s));
                next.push((w, m));
            }
        }
        for (w, m) in &next {
            match best.get_mut(m) {
                Some(words) => {
                    if words[0].len() == w.len() {
                        words.push(w.clone());
                    }
                }
                None => {
                    best.insert(m.clone(), vec![w.clone()]);
                }
            }
        }
        frontier = next;
    }
    best
}

/// Element counts by length up to `max_len`, from [`reduced_words`].
pub fn counts_by_length(system: &AffineCoxeterSystem, max_len: usize) -> Vec<usize> {
    let mut counts = vec![0; max_len + 1];
    for words in reduced_words(system, max_len).values() {
        counts[words[0].len()] += 1;
    }
    counts
}

/// Dense integer power series in `nvars` variables truncated at total degree `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    pub nvars: usize,
    pub bound: u32,
    pub coeffs: BTreeMap<Vec<u32>, i128>,
}

impl IntSeries {
    pub fn one(nvars: usize, bound: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; nvars], 1);
        IntSeries {
            nvars,
            bound,
            coeffs,
        }
    }

    fn from_terms(nvars: usize, bound: u32, terms: &[(Vec<u32>, i128)]) -> Self {
        let mut s = IntSeries {
            nvars,
            bound,
            coeffs: BTreeMap::new(),
        };
        for (e, c) in terms {
            if e.iter().sum::<u32>() <= bound {
                *s.coeffs.entry(e.clone()).or_insert(0) += c;
            }
        }
        s.coeffs.retain(|_, c| *c != 0);
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                if e.iter().sum::<u32>() <= self.bound {
                    *out.entry(e).or_insert(0) += x * y;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        IntSeries {
            nvars: self.nvars,
            bound: self.bound,
            coeffs: out,
        }
    }

    /// Multiplies by `1 + sign·x^e`.
    pub fn times_binomial(&self, e: &[u32], sign: i128) -> Self {
        let f = Self::from_terms(
            self.nvars,
            self.bound,
            &[(vec![0; self.nvars], 1), (e.to_vec(), sign)],
        );
        self.mul(&f)
    }

    /// Multiplies by `1 + x^e + ... + x^{ke}`.
    pub fn times_geometric(&self, e: &[u32], k: u32) -> Self {
        let terms: Vec<_> = (0..=k)
            .map(|j| (e.iter().map(|x| x * j).collect(), 1))
            .collect();
        self.mul(&Self::from_terms(self.nvars, self.bound, &terms))
    }

    /// Divides by `1 - x^e` via `Σ_k x^{ke}`.
    pub fn over_one_minus(&self, e: &[u32]) -> Self {
        let d: u32 = e.iter().sum();
        assert!(d > 0);
        let terms: Vec<_> = (0..=self.bound / d)
            .map(|j| (e.iter().map(|x| x * j).collect(), 1))
            .collect();
        self.mul(&Self::from_terms(self.nvars, self.bound, &terms))
    }

    /// Coefficient of `x^e`.
    pub fn coefficient(&self, e: &[u32]) -> i128 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }
}

fn mono(nvars: usize, parts: &[(usize, u32)]) -> Vec<u32> {
    let mut e = vec![0; nvars];
    for &(i, k) in parts {
        e[i] += k;
    }
    e
}

/// Hand transcription of the product formulas for the multi-class types,
/// expanded with [`IntSeries`]. Variable `j` is `t_{j+1}`.
pub fn product_formula(label: &str, bound: u32) -> IntSeries {
    let family = &label[..1];
    let n: u32 = label[1..].parse().unwrap();
    match family {
        "A" => {
            assert_eq!(n, 1);
            IntSeries::one(2, bound)
                .times_binomial(&[1, 0], 1)
                .times_binomial(&[0, 1], 1)
                .over_one_minus(&[1, 1])
        }
        "G" => IntSeries::one(2, bound)
            .times_binomial(&[1, 0], 1)
            .times_geometric(&[1, 0], 2)
            .times_binomial(&[0, 1], 1)
            .times_geometric(&[1, 1], 2)
            .over_one_minus(&[2, 1])
            .over_one_minus(&[3, 2]),
        "B" => {
            // (1 - t1^n)/(1 - t1)^n · Π_{i<n} (1 - t1^{2i}) · Π_{i<n} (1 + t1^i t2)/(1 - t1^{n-1+i} t2)
            let mut s = IntSeries::one(2, bound).times_binomial(&[n, 0], -1);
            for _ in 0..n {
                s = s.over_one_minus(&[1, 0]);
            }
            for i in 1..n {
                s = s.times_binomial(&[2 * i, 0], -1);
            }
            for i in 0..n {
                s = s.times_binomial(&[i, 1], 1).over_one_minus(&[n - 1 + i, 1]);
            }
            s
        }
        "F" => {
            let mut s = IntSeries::one(2, bound);
            for i in 1..=3u32 {
                s = s
                    .times_binomial(&[i + 1, 0], -1)
                    .times_binomial(&[i, 1], 1)
                    .times_binomial(&[0, i], -1)
                    .over_one_minus(&[1, 0])
                    .over_one_minus(&[0, 1]);
            }
            s.times_binomial(&[1, 2], 1)
                .times_binomial(&[2, 2], 1)
                .times_binomial(&[3, 3], 1)
                .over_one_minus(&[3, 2])
                .over_one_minus(&[4, 3])
                .over_one_minus(&[5, 3])
                .over_one_minus(&[6, 5])
        }
        "C" => {
            let mut s = IntSeries::one(3, bound);
            for i in 0..n {
                s = s
                    .times_binomial(&mono(3, &[(0, i + 1)]), -1)
                    .times_binomial(&mono(3, &[(0, i), (1, 1)]), 1)
                    .times_binomial(&mono(3, &[(0, i), (2, 1)]), 1)
                    .over_one_minus(&[1, 0, 0])
                    .over_one_minus(&mono(3, &[(0, n - 1 + i), (1, 1), (2, 1)]));
            }
            s
        }
        _ => panic!("no product formula for {label}"),
    }
}

/// Single-variable Bott product `Π (1 - t^{m_i+1}) / ((1 - t)(1 - t^{m_i}))`.
pub fn bott_formula(exponents: &[u32], bound: u32) -> IntSeries {
    let mut s = IntSeries::one(1, bound);
    for &m in exponents {
        s = s
            .times_binomial(&[m + 1], -1)
            .over_one_minus(&[1])
            .over_one_minus(&[m]);
    }
    s
}

/// Direct substitution into the G2 product.
pub fn g2_value(t1: &Q, t2: &Q) -> Q {
    let one = Q::one();
    let num =
        (&one + t1) * (&one + t1 + t1 * t1) * (&one + t2) * (&one + t1 * t2 + t1 * t1 * t2 * t2);
    let den = (&one - t1 * t1 * t2) * (&one - t1 * t1 * t1 * t2 * t2);
    num / den
}

/// Direct substitution into the A1 product.
pub fn a1_value(t1: &Q, t2: &Q) -> Q {
    let one = Q::one();
    (&one + t1) * (&one + t2) / (&one - t1 * t2)
}

pub fn mat(rows: Vec<Vec<Q>>) -> RationalMatrix {
    RationalMatrix::from_rows(rows)
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.dim();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n).map(|j| m.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(mat(a.into_iter().map(|row| row[n..].to_vec()).collect()))
}

fn small_nonzero<R: Rng>(rng: &mut R) -> Q {
    let n: i64 = loop {
        let v = rng.gen_range(-3..=3);
        if v != 0 {
            break v;
        }
    };
    q(n, rng.gen_range(1..=2))
}

/// `μ(s,t)·μ(t,s)` for the reflection W-graph of a Coxeter label.
fn mu_product(label: Option<u32>) -> i64 {
    match label {
        Some(2) => 0,
        Some(3) => 1,
        Some(4) => 2,
        Some(6) => 3,
        None => 4,
        Some(m) => panic!("unsupported label {m}"),
    }
}

/// Reflection representation on the span of the generators:
/// `T_s e_s = -e_s`, `T_s e_t = q e_t + q_o μ(s,t) e_s`, with random
/// rescaling of the `μ` coefficients.
pub fn reflection_generators<R: Rng>(
    system: &AffineCoxeterSystem,
    q_o: u64,
    rng: &mut R,
) -> Vec<RationalMatrix> {
    let n = system.generator_count();
    let qo = q(q_o as i64, 1);
    let qq = &qo * &qo;
    let mut mu = vec![vec![Q::zero(); n]; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let p = mu_product(system.coxeter_matrix().get(s, t));
            if p != 0 {
                let a = small_nonzero(rng);
                mu[t][s] = q(p, 1) / &a;
                mu[s][t] = a;
            }
        }
    }
    (0..n)
        .map(|s| {
            let mut m = RationalMatrix::zero(n);
            for t in 0..n {
                if t == s {
                    m.set(s, s, q(-1, 1));
                } else {
                    m.set(t, t, qq.clone());
                    m.set(s, t, &qo * &mu[s][t]);
                }
            }
            m
        })
        .collect()
}

/// A 1-dimensional character constant on classes, with random signs.
pub fn random_character<R: Rng>(
    system: &AffineCoxeterSystem,
    q_o: u64,
    rng: &mut R,
) -> Vec<RationalMatrix> {
    let signs: Vec<bool> = (0..system.class_count()).map(|_| rng.gen()).collect();
    let qq = q((q_o * q_o) as i64, 1);
    (0..system.generator_count())
        .map(|s| {
            let v = if signs[system.class_of(s)] {
                qq.clone()
            } else {
                q(-1, 1)
            };
            RationalMatrix::scalar(1, v)
        })
        .collect()
}

pub fn direct_sum(a: &[RationalMatrix], b: &[RationalMatrix]) -> Vec<RationalMatrix> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let (p, r) = (x.dim(), y.dim());
            let mut m = RationalMatrix::zero(p + r);
            for i in 0..p {
                for j in 0..p {
                    m.set(i, j, x.get(i, j).clone());
                }
            }
            for i in 0..r {
                for j in 0..r {
                    m.set(p + i, p + j, y.get(i, j).clone());
                }
            }
            m
        })
        .collect()
}

/// `P M P^{-1}` for a random invertible `P` with small entries.
pub fn random_conjugate<R: Rng>(gens: &[RationalMatrix], rng: &mut R) -> Vec<RationalMatrix> {
    let n = gens[0].dim();
    let (p, p_inv) = loop {
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2), 1)).collect())
            .collect();
        let p = mat(rows);
        if let Some(inv) = inverse(&p) {
            break (p, inv);
        }
    };
    gens.iter().map(|g| p.mul(g).mul(&p_inv)).collect()
}
