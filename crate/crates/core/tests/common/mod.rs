//! Oracles that share no arithmetic with the library: point evaluation
//! modulo p, dense linear algebra on monomial bases, closed-form series.
#![allow(dead_code)]

use hypersurf::poly::{PolyRing, Polynomial};

pub fn p_of(ring: &PolyRing) -> u64 {
    ring.field().characteristic() as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn eval(ring: &PolyRing, f: &Polynomial, pt: &[u64; 4]) -> u64 {
    let p = p_of(ring);
    f.terms().iter().fold(0, |acc, (m, c)| {
        let v = m
            .exponents()
            .iter()
            .zip(pt)
            .fold(*c as u64 % p, |v, (&e, &x)| v * pow_mod(x, e as u64, p) % p);
        (acc + v) % p
    })
}

/// Entries of `m` evaluated at `pt`, row major.
pub fn eval_matrix(ring: &PolyRing, m: &hypersurf::matrix::PolyMatrix, pt: &[u64; 4]) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| eval(ring, m.get(i, j), pt)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(0, |s, (x, brow)| (s + x * brow[j]) % p))
                .collect()
        })
        .collect()
}

/// Betti numbers of the residue field over a hypersurface in `n`
/// variables: coefficients of `(1 + t)^n / (1 - t^2)`.
pub fn residue_field_betti(n: u32, len: usize) -> Vec<usize> {
    let num: Vec<usize> = (0..=n).map(|k| binomial(n, k)).collect();
    (0..len)
        .map(|i| (0..=i).rev().step_by(2).filter_map(|j| num.get(j)).sum())
        .collect()
}

pub fn binomial(n: u32, k: u32) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

fn monomials(weights: &[u32; 4], d: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=d / weights[0] {
        for b in 0..=(d - a * weights[0]) / weights[1] {
            for c in 0..=(d - a * weights[0] - b * weights[1]) / weights[2] {
                let rest = d - a * weights[0] - b * weights[1] - c * weights[2];
                if rest.is_multiple_of(weights[3]) {
                    out.push([a, b, c, rest / weights[3]]);
                }
            }
        }
    }
    out
}

fn rank_mod(rows: &mut [Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - k * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim_k (S/I)_d` for `d = 0..=max_deg`, by the rank of the span of
/// `m·g` over all monomials `m` of complementary degree.
pub fn quotient_hilbert(ring: &PolyRing, gens: &[Polynomial], max_deg: u32) -> Vec<usize> {
    let p = p_of(ring);
    let w = *ring.weights();
    let deg = |e: &[u32; 4]| e.iter().zip(&w).map(|(a, b)| a * b).sum::<u32>();
    (0..=max_deg)
        .map(|d| {
            let basis = monomials(&w, d);
            let index = |e: &[u32; 4]| basis.iter().position(|b| b == e);
            let mut rows = Vec::new();
            for g in gens {
                let Some((lead, _)) = g.terms().first() else { continue };
                let ge: [u32; 4] = lead.exponents().map(|e| e as u32);
                let gd = deg(&ge);
                if gd > d {
                    continue;
                }
                for m in monomials(&w, d - gd) {
                    let mut row = vec![0u64; basis.len()];
                    for (t, c) in g.terms() {
                        let e = t.exponents();
                        let prod = [
                            m[0] + e[0] as u32,
                            m[1] + e[1] as u32,
                            m[2] + e[2] as u32,
                            m[3] + e[3] as u32,
                        ];
                        let i = index(&prod).expect("homogeneous generator");
                        row[i] = (row[i] + *c as u64) % p;
                    }
                    rows.push(row);
                }
            }
            basis.len() - rank_mod(&mut rows, p)
        })
        .collect()
}

/// Length of `S/I` when it is finite: the Hilbert function must vanish in
/// `window` consecutive degrees below `max_deg`.
pub fn quotient_length(ring: &PolyRing, gens: &[Polynomial], max_deg: u32) -> Option<usize> {
    let h = quotient_hilbert(ring, gens, max_deg);
    let min_w = *ring.weights().iter().min().unwrap() as usize;
    let max_w = *ring.weights().iter().max().unwrap() as usize;
    let window = max_w.max(min_w);
    let tail = h.len().checked_sub(window)?;
    h[tail..].iter().all(|&x| x == 0).then(|| h.iter().sum())
}
