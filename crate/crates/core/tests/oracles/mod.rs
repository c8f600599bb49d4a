//! Independent reference computations used by the integration tests. None
//! of this goes through the library's ring or series code.

#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn binom(n: usize, k: usize) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * q((n - i) as i64) / q((i + 1) as i64);
    }
    r
}

fn factorial(n: usize) -> Q {
    (1..=n).fold(Q::one(), |acc, i| acc * q(i as i64))
}

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        let s: Q = (0..m).map(|j| binom(m + 1, j) * &b[j]).sum();
        b.push(-s / q((m + 1) as i64));
    }
    b
}

/// Coefficients of `x / (1 - e^{-x})`.
pub fn todd_coeffs(n: usize) -> Vec<Q> {
    let b = bernoulli(n);
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            sign * &b[k] / factorial(k)
        })
        .collect()
}

/// Coefficients of `x / tanh(x)`.
pub fn l_coeffs(n: usize) -> Vec<Q> {
    let b = bernoulli(n);
    (0..=n)
        .map(|k| {
            if k % 2 == 1 {
                Q::zero()
            } else {
                q(1i64 << k) * &b[k] / factorial(k)
            }
        })
        .collect()
}

/// Coefficients of `a(1+y)/(1 - e^{-a(1+y)}) - a y`, each a list of
/// coefficients of `y^0, y^1, ...`.
pub fn tdy_coeffs(n: usize) -> Vec<Vec<Q>> {
    let td = todd_coeffs(n);
    (0..=n)
        .map(|k| {
            let mut c: Vec<Q> = (0..=k).map(|j| &td[k] * binom(k, j)).collect();
            if k == 1 {
                c[1] -= q(1);
            }
            while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
                c.pop();
            }
            c
        })
        .collect()
}

/// Product of truncated power series.
pub fn series_mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn series_pow(a: &[Q], e: usize, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n + 1];
    out[0] = Q::one();
    for _ in 0..e {
        out = series_mul(&out, a, n);
    }
    out
}

/// Nonzero vectors in `{-1,0,1}^{n+1}` up to sign.
pub fn form_pool(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32 + 1);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..=n)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if let Some(first) = v.iter().find(|x| **x != 0) {
            if *first > 0 {
                out.push(v);
            }
        }
    }
    out
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn int_rank(rows: &[&[i64]]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    r
}

fn rank_of(forms: &[Vec<i64>], mask: usize) -> usize {
    let rows: Vec<&[i64]> = (0..forms.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| forms[i].as_slice())
        .collect();
    int_rank(&rows)
}

/// Hyperplanes in `P^n` meet with normal crossings exactly when every
/// subset of `k` forms has rank `min(k, n+1)`.
pub fn normal_crossings(forms: &[Vec<i64>], n: usize) -> bool {
    (0..1usize << forms.len()).all(|mask| rank_of(forms, mask) == (mask.count_ones() as usize).min(n + 1))
}

/// Characteristic polynomial `sum_X mu(X) t^{dim X}` of a central
/// arrangement in `C^{n+1}`, from its intersection lattice; index = power.
pub fn characteristic_polynomial(forms: &[Vec<i64>], n: usize) -> Vec<i64> {
    // a flat is the closed set of forms vanishing on it, with its rank
    let mut flats: Vec<(usize, usize)> = Vec::new();
    for mask in 0..1usize << forms.len() {
        let r = rank_of(forms, mask);
        let closure = (0..forms.len())
            .filter(|&i| rank_of(forms, mask | (1 << i)) == r)
            .fold(mask, |acc, i| acc | (1 << i));
        if !flats.iter().any(|&(c, _)| c == closure) {
            flats.push((closure, r));
        }
    }
    flats.sort_by_key(|&(_, r)| r);
    let mut mu: Vec<i64> = Vec::with_capacity(flats.len());
    for (i, &(x, rx)) in flats.iter().enumerate() {
        if rx == 0 {
            mu.push(1);
            continue;
        }
        let s: i64 = (0..i)
            .filter(|&j| flats[j].1 < rx && flats[j].0 & !x == 0)
            .map(|j| mu[j])
            .sum();
        mu.push(-s);
    }
    let mut poly = vec![0i64; n + 2];
    for (&(_, r), m) in flats.iter().zip(&mu) {
        poly[n + 1 - r] += m;
    }
    poly
}

/// Euler characteristic of `P^n` minus the hyperplanes: the derivative of
/// the characteristic polynomial at 1.
pub fn mobius_complement_euler(forms: &[Vec<i64>], n: usize) -> i64 {
    let chi = characteristic_polynomial(forms, n);
    chi.iter().enumerate().map(|(d, m)| d as i64 * m).sum()
}

/// Number of points of `P^n(F_p)` off all the hyperplanes.
pub fn count_complement_points(forms: &[Vec<i64>], n: usize, p: i64) -> i64 {
    let mut count = 0;
    let total = (p as usize).pow(n as u32 + 1);
    for code in 1..total {
        let mut c = code;
        let v: Vec<i64> = (0..=n)
            .map(|_| {
                let d = (c % p as usize) as i64;
                c /= p as usize;
                d
            })
            .collect();
        // one representative per line: first nonzero coordinate is 1
        if v.iter().find(|x| **x != 0) != Some(&1) {
            continue;
        }
        if forms
            .iter()
            .all(|f| f.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>().rem_euclid(p) != 0)
        {
            count += 1;
        }
    }
    count
}

/// Lagrange interpolation through `(x_i, y_i)`, coefficients by power.
pub fn interpolate(points: &[(i64, i64)]) -> Vec<Q> {
    let k = points.len();
    let mut out = vec![Q::zero(); k];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * q(xj);
            }
            basis = next;
            denom *= q(xi - xj);
        }
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * q(yi) / &denom;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// Substitutes `q -> -y` in a polynomial given by coefficients.
pub fn q_to_minus_y(p: &[Q]) -> Vec<Q> {
    p.iter()
        .enumerate()
        .map(|(d, c)| if d % 2 == 0 { c.clone() } else { -c.clone() })
        .collect()
}

/// Commuting pairs counted directly from a multiplication rule.
pub fn commuting_pairs(order: usize, mul: impl Fn(usize, usize) -> usize) -> usize {
    (0..order)
        .map(|a| (0..order).filter(|&b| mul(a, b) == mul(b, a)).count())
        .sum()
}

/// Elements of `Z/n` killed by `r`.
pub fn cyclic_torsion_points(r: i64, n: i64) -> i64 {
    (0..n).filter(|x| (r * x) % n == 0).count() as i64
}

pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
