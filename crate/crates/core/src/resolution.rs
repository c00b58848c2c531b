//! Koszul matrices and the block-built free resolution of `R/I` for an
//! Ulrich ideal `I = (a₁, …, a_d, b)R` given by a certificate.
//!
//! With `K = K(a; S)`, `L = K(x; S)` and ranks `G_i = Σ_{j≤i} C(d, j)`:
//!
//! ```text
//! ∂₁ = [∂ᴷ₁ | b]
//! ∂ᵢ = [ ∂ᴷᵢ | (-1)^{i-1}·b·E | ᵗ∂ᴸ_{i-1} | O ]     rows K_{i-1}
//!      [ O   |          ∂_{i-1}                ]     rows G_{i-2}
//! ```
//!
//! and `∂ᵢ = ∂_{d+1}` for `i ≥ d+1`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rayon::prelude::*;

use crate::engine::{Engine, LocalIdeal};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::PolyMatrix;
use crate::poly::{Poly, Ring};
use crate::ulrich::{check_certificate, UlrichCertificate};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `k`-subsets of `{0, …, n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Koszul differential for any `p`, with empty shapes outside `1..=d`.
fn koszul_block(ring: &Arc<Ring>, gens: &[Poly], p: usize) -> PolyMatrix {
    let d = gens.len();
    let rows = if p == 0 { Vec::new() } else { subsets(d, p - 1) };
    let cols = if p > d { Vec::new() } else { subsets(d, p) };
    let mut m = PolyMatrix::zeros(ring, rows.len(), cols.len());
    for (c, set) in cols.iter().enumerate() {
        for (alpha, &j) in set.iter().enumerate() {
            let face: Vec<usize> = set.iter().copied().filter(|&v| v != j).collect();
            let r = rows.binary_search(&face).expect("faces of a p-subset are (p-1)-subsets");
            let entry = if alpha % 2 == 0 { gens[j].clone() } else { -&gens[j] };
            m.set(r, c, entry);
        }
    }
    m
}

/// `∂_p` of the Koszul complex on `gens`: `C(d, p-1) × C(d, p)`, index sets
/// in lexicographic order, entry `(-1)^{α+1}·g_{j_α}` at `(J ∖ {j_α}, J)`.
pub fn koszul_matrix(gens: &[Poly], p: usize) -> Result<PolyMatrix> {
    let d = gens.len();
    let ring = gens.first().ok_or_else(|| Error::Dimension("no generators".into()))?.ring().clone();
    if p < 1 || p > d {
        return Err(Error::Dimension(format!("Koszul index {p} outside 1..={d}")));
    }
    Ok(koszul_block(&ring, gens, p))
}

/// `∂ᴷ_p·ᵗ∂ᴸ_p + ᵗ∂ᴸ_{p-1}·∂ᴷ_{p-1} = (Σ aᵢxᵢ)·id` for `1 ≤ p ≤ d+1`.
pub fn koszul_transpose_identity(a: &[Poly], x: &[Poly], p: usize) -> Result<bool> {
    let d = a.len();
    if x.len() != d || d == 0 {
        return Err(Error::Dimension(format!("a has {d} entries, x has {}", x.len())));
    }
    if p < 1 || p > d + 1 {
        return Err(Error::Dimension(format!("index {p} outside 1..={}", d + 1)));
    }
    let ring = a[0].ring().clone();
    let c = a.iter().zip(x).fold(Poly::zero(&ring), |acc, (ai, xi)| &acc + &(ai * xi));
    let k = |q| koszul_block(&ring, a, q);
    let l = |q| koszul_block(&ring, x, q);
    let lhs = k(p).mul(&l(p).transpose())?.add(&l(p - 1).transpose().mul(&k(p - 1))?)?;
    Ok(lhs == PolyMatrix::scalar(&c, binomial(d, p - 1)))
}

/// `G_i`, with `G_i = 2^d` for `i ≥ d`.
pub fn rank_g(d: usize, i: usize) -> usize {
    (0..=i.min(d)).map(|j| binomial(d, j)).sum()
}

/// `β_i = C(d, i) + t·β_{i-1}` for `i ≤ d` (`β₀ = 1`), then `t^{i-d}(t+1)^d`.
pub fn betti(d: usize, i: usize, t: u64) -> BigUint {
    let t = BigUint::from(t);
    if i >= d {
        return Pow::pow(&t, i - d) * Pow::pow(&(&t + 1u32), d);
    }
    let mut beta = BigUint::one();
    for j in 1..=i {
        beta = BigUint::from(binomial(d, j)) + &t * beta;
    }
    beta
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub d: usize,
    pub a: Vec<Poly>,
    pub b: Poly,
    pub x: Vec<Poly>,
    pub epsilon: Poly,
    pub f: Poly,
    /// `g = εf`.
    pub g: Poly,
    /// `∂₁, …, ∂_{d+1}`.
    pub differentials: Vec<PolyMatrix>,
}

impl ResolutionData {
    pub fn ring(&self) -> &Arc<Ring> {
        self.g.ring()
    }

    /// `∂ᵢ` for `i ≥ 1`; periodic from `d+1` on.
    pub fn differential(&self, i: usize) -> &PolyMatrix {
        assert!(i >= 1, "differentials start at 1");
        &self.differentials[i.min(self.d + 1) - 1]
    }

    /// `G_0, …, G_{d+1}`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.d + 1).map(|i| rank_g(self.d, i)).collect()
    }
}

fn assemble(ring: &Arc<Ring>, a: &[Poly], b: &Poly, x: &[Poly], g: Poly, epsilon: Poly, f: Poly) -> Result<ResolutionData> {
    let d = a.len();
    let k = |q| koszul_block(ring, a, q);
    let l = |q| koszul_block(ring, x, q);
    let mut diffs: Vec<PolyMatrix> = Vec::with_capacity(d + 1);
    diffs.push(PolyMatrix::block_assemble(ring, &[vec![k(1), PolyMatrix::scalar(b, 1)]])?);
    for i in 2..=d + 1 {
        let sign_b = if i % 2 == 0 { -b } else { b.clone() };
        let k_prev = binomial(d, i - 1);
        let g_prev3 = if i >= 3 { rank_g(d, i - 3) } else { 0 };
        let top = vec![
            k(i),
            PolyMatrix::scalar(&sign_b, k_prev),
            l(i - 1).transpose(),
            PolyMatrix::zeros(ring, k_prev, g_prev3),
        ];
        let prev = diffs[i - 2].clone();
        let bottom_left = PolyMatrix::zeros(ring, prev.rows(), binomial(d, i));
        let upper = PolyMatrix::block_assemble(ring, &[top])?;
        let lower = PolyMatrix::block_assemble(ring, &[vec![bottom_left, prev]])?;
        diffs.push(PolyMatrix::block_assemble(ring, &[vec![upper], vec![lower]])?);
    }
    Ok(ResolutionData { d, a: a.to_vec(), b: b.clone(), x: x.to_vec(), epsilon, f, g, differentials: diffs })
}

/// Builds the resolution after verifying the certificate.
pub fn build_resolution(engine: &Engine, c: &UlrichCertificate) -> Result<ResolutionData> {
    let check = check_certificate(engine, c)?;
    if let Some(failed) = check.first_failure() {
        return Err(Error::InvalidCertificate(failed.into()));
    }
    build_resolution_unchecked(c)
}

/// Builds the matrices without checking the certificate.
pub fn build_resolution_unchecked(c: &UlrichCertificate) -> Result<ResolutionData> {
    assemble(c.ring(), &c.a, &c.b, &c.x, c.g(), c.epsilon.clone(), c.f.clone())
}

/// The ring `k[a1, …, ad, b, x1, …, xd]` of symbolic entries.
pub fn symbolic_ring(d: usize, field: Field) -> Result<Arc<Ring>> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    let mut names: Vec<String> = (1..=d).map(|i| format!("a{i}")).collect();
    names.push("b".into());
    names.extend((1..=d).map(|i| format!("x{i}")));
    Ring::new(field, &names)
}

/// The resolution with `a, b, x` as indeterminates, `ε = 1` and
/// `f = g = b² + Σ aᵢxᵢ`.
pub fn symbolic_resolution(d: usize, field: Field) -> Result<ResolutionData> {
    let ring = symbolic_ring(d, field)?;
    let a: Vec<Poly> = (0..d).map(|i| Poly::var(&ring, i)).collect();
    let b = Poly::var(&ring, d);
    let x: Vec<Poly> = (0..d).map(|i| Poly::var(&ring, d + 1 + i)).collect();
    let g = a.iter().zip(&x).fold(&b * &b, |acc, (ai, xi)| &acc + &(ai * xi));
    assemble(&ring, &a, &b, &x, g.clone(), Poly::one(&ring), g)
}

/// `[O | g·E_{G_{i-1}}]`, the expected value of `∂ᵢ·∂_{i+1}`.
pub fn expected_product(r: &ResolutionData, i: usize) -> PolyMatrix {
    let rows = rank_g(r.d, i - 1);
    let cols = rank_g(r.d, i + 1);
    let mut m = PolyMatrix::zeros(r.ring(), rows, cols);
    for k in 0..rows {
        m.set(k, cols - rows + k, r.g.clone());
    }
    m
}

/// Names of the failed identities `∂ᵢ·∂_{i+1} = [O | gE]`, `1 ≤ i ≤ d+1`.
pub fn complex_defects(r: &ResolutionData) -> Vec<String> {
    let mut bad: Vec<usize> = (1..=r.d + 1)
        .into_par_iter()
        .filter(|&i| {
            r.differential(i).mul(r.differential(i + 1)).map_or(true, |p| p != expected_product(r, i))
        })
        .collect();
    bad.sort_unstable();
    bad.into_iter()
        .map(|i| {
            if i == r.d + 1 {
                format!("d_{i}^2 = g*E_{}", 1usize << r.d)
            } else {
                format!("d_{i}*d_{} = [O | g*E]", i + 1)
            }
        })
        .collect()
}

pub fn verify_complex(r: &ResolutionData) -> bool {
    complex_defects(r).is_empty()
}

/// `(∂_{d+1}, ∂_{d+1})`, whose product is `g·E_{2^d}`.
pub fn matrix_factorization(r: &ResolutionData) -> (PolyMatrix, PolyMatrix) {
    let m = r.differential(r.d + 1).clone();
    (m.clone(), m)
}

/// Every entry of every differential lies in the maximal ideal.
pub fn minimality_check(r: &ResolutionData) -> bool {
    r.differentials.iter().all(|m| m.entries().all(|p| !p.is_unit()))
}

/// The ideal of entries of each `∂ᵢ`, plus `(f)`, equals `(a, b) + (f)`.
pub fn fitting_ideal_check(engine: &Engine, r: &ResolutionData) -> Result<bool> {
    let ring = r.ring();
    let mut gens = r.a.clone();
    gens.push(r.b.clone());
    gens.push(r.f.clone());
    let target = LocalIdeal::new(ring, gens)?;
    for m in &r.differentials {
        let mut entries: Vec<Poly> = m.entries().filter(|p| !p.is_zero()).cloned().collect();
        if entries.iter().any(Poly::is_unit) {
            return Ok(false);
        }
        entries.push(r.f.clone());
        let ideal = LocalIdeal::new(ring, entries)?;
        if !engine.ideal_equal(&ideal, &target)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ranks of `∂₁, …, ∂_{i_max}` as the sequence `β₀, β₁, …` they define.
pub fn rank_sequence(r: &ResolutionData, i_max: usize) -> Vec<usize> {
    let mut out = vec![r.differential(1).rows()];
    out.extend((1..=i_max).map(|i| r.differential(i).cols()));
    out
}

/// Text layout: block rules after the Koszul part for `d ≤ 3`, plain rows
/// otherwise.
pub fn render_text(r: &ResolutionData) -> String {
    let mut out = String::new();
    for i in 1..=r.d + 1 {
        let m = r.differential(i);
        let _ = writeln!(out, "d_{i} ({}x{}):", m.rows(), m.cols());
        if r.d > 3 {
            out.push_str(&m.to_string());
            continue;
        }
        let split_col = binomial(r.d, i);
        let split_row = if i == 1 { m.rows() } else { binomial(r.d, i - 1) };
        out.push_str(&render_blocks(m, split_row, split_col));
    }
    let _ = writeln!(out, "g = {}", r.g);
    out
}

fn render_blocks(m: &PolyMatrix, split_row: usize, split_col: usize) -> String {
    let cells: Vec<Vec<String>> =
        (0..m.rows()).map(|i| m.row(i).iter().map(|p| p.to_string()).collect()).collect();
    let mut widths = vec![0; m.cols()];
    for row in &cells {
        for (j, c) in row.iter().enumerate() {
            widths[j] = widths[j].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |row: &[String]| {
        let mut s = String::from("[");
        for (j, c) in row.iter().enumerate() {
            if j == split_col && j > 0 {
                s.push_str(" |");
            }
            if j > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{:>w$}", c, w = widths[j]);
        }
        s.push_str("]\n");
        s
    };
    for (i, row) in cells.iter().enumerate() {
        if i == split_row && i > 0 {
            let width = line(row).chars().count() - 1;
            out.push_str(&"-".repeat(width));
            out.push('\n');
        }
        out.push_str(&line(row));
    }
    out
}
