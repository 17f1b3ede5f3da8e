//! Skew-symmetric k-linear maps on R^n in the basis `dx_I = dx_{i1} ^ ... ^ dx_{ik}`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::variable_name;
use crate::scalar::{Scalar, Tolerance};

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Sorts a multi-index, returning it with the sign of the sorting
/// permutation, or `None` when an index repeats.
pub fn canonicalize(index: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut v = index.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Position of a canonical multi-index in [`combinations`] order.
fn rank(index: &[usize], n: usize) -> usize {
    // number of k-subsets lexicographically smaller than `index`
    let k = index.len();
    let mut r = 0;
    let mut prev = 0;
    for (pos, &i) in index.iter().enumerate() {
        for skipped in prev..i {
            r += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = i + 1;
    }
    r
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Determinant of a square matrix given as rows.
///
/// Laplace expansion up to 4x4, fraction-free (Bareiss) elimination above.
pub fn determinant<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    if n <= 4 {
        laplace(rows)
    } else {
        bareiss(rows.to_vec())
    }
}

fn laplace<S: Scalar>(rows: &[Vec<S>]) -> S {
    match rows.len() {
        0 => S::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].clone() * rows[1][1].clone() - rows[0][1].clone() * rows[1][0].clone(),
        n => {
            let mut acc = S::zero();
            for col in 0..n {
                if rows[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<S>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = rows[0][col].clone() * laplace(&minor);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

fn bareiss<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut sign = S::one();
    let mut prev = S::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num.checked_div(&prev).expect("Bareiss pivot is nonzero");
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// A skew-symmetric k-linear map on R^n, `sum_I alpha_I dx_I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingMap<S> {
    n: usize,
    k: usize,
    /// One coefficient per multi-index, in [`combinations`] order.
    coeffs: Vec<S>,
}

impl<S: Scalar> AlternatingMap<S> {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dim: n });
        }
        Ok(AlternatingMap { n, k, coeffs: vec![S::zero(); binomial(n, k)] })
    }

    /// Builds a map from coefficients listed in [`combinations`] order.
    pub fn from_coefficients(n: usize, k: usize, coeffs: Vec<S>) -> Result<Self> {
        let expected = binomial(n, k);
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dim: n });
        }
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "coefficient count",
                expected,
                found: coeffs.len(),
            });
        }
        Ok(AlternatingMap { n, k, coeffs })
    }

    /// `dx_{i1} ^ ... ^ dx_{ik}` for any (possibly unsorted) index list.
    pub fn basis(n: usize, index: &[usize]) -> Result<Self> {
        let mut out = Self::zero(n, index.len())?;
        if let Some(&bad) = index.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch { what: "basis index", expected: n, found: bad + 1 });
        }
        if let Some((canon, sign)) = canonicalize(index) {
            let slot = rank(&canon, n);
            out.coeffs[slot] = S::from_i64(sign as i64);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Coefficient on `dx_I`, with the permutation sign applied for an
    /// unsorted `index` and zero for a repeated one.
    pub fn coefficient(&self, index: &[usize]) -> S {
        if index.len() != self.k || index.iter().any(|&i| i >= self.n) {
            return S::zero();
        }
        match canonicalize(index) {
            Some((canon, sign)) => {
                let c = self.coeffs[rank(&canon, self.n)].clone();
                if sign < 0 { -c } else { c }
            }
            None => S::zero(),
        }
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coeffs
    }

    /// `(multi-index, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &S)> {
        combinations(self.n, self.k).into_iter().zip(self.coeffs.iter())
    }

    /// `sum_I alpha_I det(M_I)` with `(M_I)_{rs} = vectors[s][I[r]]`.
    pub fn eval(&self, vectors: &[Vec<S>]) -> Result<S> {
        if vectors.len() != self.k {
            return Err(Error::DimensionMismatch {
                what: "argument count",
                expected: self.k,
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.n) {
            return Err(Error::DimensionMismatch { what: "vector length", expected: self.n, found: v.len() });
        }
        let mut acc = S::zero();
        for (index, alpha) in self.terms() {
            if alpha.is_zero() {
                continue;
            }
            acc = acc + alpha.clone() * minor(vectors, &index);
        }
        Ok(acc)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { what: "wedge dimension", expected: self.n, found: other.n });
        }
        let mut out = Self::zero(self.n, self.k + other.k)?;
        for (i, a) in self.terms() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms() {
                if b.is_zero() {
                    continue;
                }
                let joined: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
                if let Some((canon, sign)) = canonicalize(&joined) {
                    let slot = rank(&canon, self.n);
                    let term = a.clone() * b.clone();
                    out.coeffs[slot] =
                        if sign < 0 { out.coeffs[slot].clone() - term } else { out.coeffs[slot].clone() + term };
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        AlternatingMap { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch { what: "alternating map shape", expected: self.k, found: other.k });
        }
        Ok(AlternatingMap {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    /// Coefficientwise comparison under the backend's equality contract.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        if self.n != other.n || self.k != other.k {
            return false;
        }
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| {
            let scale = a.magnitude().max(b.magnitude());
            S::within(&(a.clone() - b.clone()), scale, tol)
        })
    }
}

/// Determinant of the rows `index` of the matrix whose columns are `vectors`.
pub fn minor<S: Scalar>(vectors: &[Vec<S>], index: &[usize]) -> S {
    let rows: Vec<Vec<S>> = index
        .iter()
        .map(|&r| vectors.iter().map(|v| v[r].clone()).collect())
        .collect();
    determinant(&rows)
}

/// Standard basis vector `e_i` of R^n (0-based `i`).
pub fn basis_vector<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    (0..n).map(|j| if j == i { S::one() } else { S::zero() }).collect()
}

/// Reads off `alpha_I = F(e_{i1}, ..., e_{ik})` by probing with basis vectors.
/// Linearity and skewness of `F` are assumed, not checked.
pub fn try_extract_from_function<S: Scalar>(
    n: usize,
    k: usize,
    f: impl Fn(&[Vec<S>]) -> Result<S>,
) -> Result<AlternatingMap<S>> {
    let coeffs = combinations(n, k)
        .iter()
        .map(|index| {
            let probes: Vec<Vec<S>> = index.iter().map(|&i| basis_vector(n, i)).collect();
            f(&probes)
        })
        .collect::<Result<Vec<S>>>()?;
    AlternatingMap::from_coefficients(n, k, coeffs)
}

pub fn extract_from_function<S: Scalar>(
    n: usize,
    k: usize,
    f: impl Fn(&[Vec<S>]) -> S,
) -> Result<AlternatingMap<S>> {
    try_extract_from_function(n, k, |v| Ok(f(v)))
}

/// Outcome of one sampled property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub pass: bool,
    pub max_violation: f64,
    pub samples: usize,
}

impl PropertyCheck {
    fn new() -> Self {
        PropertyCheck { pass: true, max_violation: 0.0, samples: 0 }
    }

    fn record<S: Scalar>(&mut self, residual: S, scale: f64, tol: &Tolerance) {
        self.samples += 1;
        self.max_violation = self.max_violation.max(residual.magnitude());
        if !S::within(&residual, scale, tol) {
            self.pass = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingReport {
    pub additivity: PropertyCheck,
    pub homogeneity: PropertyCheck,
    pub skewness: PropertyCheck,
}

impl AlternatingReport {
    pub fn pass(&self) -> bool {
        self.additivity.pass && self.homogeneity.pass && self.skewness.pass
    }

    pub fn max_violation(&self) -> f64 {
        self.additivity.max_violation.max(self.homogeneity.max_violation).max(self.skewness.max_violation)
    }
}

fn random_scalar<S: Scalar>(rng: &mut impl Rng) -> S {
    S::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4))
}

fn random_vector<S: Scalar>(rng: &mut impl Rng, n: usize) -> Vec<S> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

/// Samples random arguments and checks additivity and homogeneity in a
/// random slot, and sign reversal under a random transposition.
pub fn check_alternating<S: Scalar>(
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
    f: impl Fn(&[Vec<S>]) -> Result<S>,
) -> Result<AlternatingReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AlternatingReport {
        additivity: PropertyCheck::new(),
        homogeneity: PropertyCheck::new(),
        skewness: PropertyCheck::new(),
    };
    for _ in 0..trials {
        let args: Vec<Vec<S>> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
        if k == 0 {
            continue;
        }
        let base = f(&args)?;
        let slot = rng.random_range(0..k);

        let other = random_vector::<S>(&mut rng, n);
        let mut summed = args.clone();
        summed[slot] = summed[slot].iter().zip(&other).map(|(a, b)| a.clone() + b.clone()).collect();
        let mut replaced = args.clone();
        replaced[slot] = other;
        let (fs, fr) = (f(&summed)?, f(&replaced)?);
        let scale = fs.magnitude().max(base.magnitude()).max(fr.magnitude());
        report.additivity.record(fs - base.clone() - fr, scale, tol);

        let lambda = random_scalar::<S>(&mut rng);
        let mut scaled = args.clone();
        scaled[slot] = scaled[slot].iter().map(|a| a.clone() * lambda.clone()).collect();
        let fl = f(&scaled)?;
        let expected = lambda * base.clone();
        let scale = fl.magnitude().max(expected.magnitude());
        report.homogeneity.record(fl - expected, scale, tol);

        if k >= 2 {
            let i = rng.random_range(0..k);
            let j = (i + rng.random_range(1..k)) % k;
            let mut swapped = args.clone();
            swapped.swap(i, j);
            let fw = f(&swapped)?;
            let scale = fw.magnitude().max(base.magnitude());
            report.skewness.record(fw + base, scale, tol);
        }
    }
    Ok(report)
}

impl<S: Scalar> fmt::Display for AlternatingMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (index, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let basis: Vec<String> = index.iter().map(|&i| format!("d{}", variable_name(i, self.n))).collect();
            if basis.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*{}", basis.join("^"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
