//! Irreducible character degrees from the class algebra, in exact
//! arithmetic over a prime field `F_r`.
//!
//! For an irreducible `chi` the central character
//! `w_k = |C_k| chi(g_k) / chi(1)` is a common eigenvector of the class
//! multiplication matrices, normalised by `w_1 = 1`, and
//! `sum_k w_k w_{k*} / |C_k| = |G| / chi(1)^2`.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::groups::FiniteGroup;
use super::ring::is_prime;
use super::table::GroupTable;
use super::OracleError;
use crate::DimensionMultiset;

/// Upper end of the prime search; keeps products inside `u64`.
pub const PRIME_BOUND: u64 = 1 << 31;

fn pow_mod(mut b: u64, mut e: u64, r: u64) -> u64 {
    let mut acc = 1 % r;
    b %= r;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % r;
        }
        b = b * b % r;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, r: u64) -> u64 {
    pow_mod(a, r - 2, r)
}

/// Smallest prime `r = 1 mod exponent` with `r^2 > 4 |G|`.
pub fn dixon_prime(order: u64, exponent: u64) -> Result<u64, OracleError> {
    let mut r = exponent + 1;
    while r < PRIME_BOUND {
        if (r as u128) * (r as u128) > 4 * order as u128 && is_prime(r) {
            return Ok(r);
        }
        r += exponent;
    }
    Err(OracleError::NoSuitablePrime {
        exponent,
        bound: PRIME_BOUND,
    })
}

/// `c[(i * k + j) * k + l] = #{x in C_i : x^-1 z_l in C_j}` for class
/// representatives `z_l`, so that `C_i C_j = sum_l c_ijl C_l`.
fn structure_constants<G>(t: &GroupTable<G>) -> Vec<u32>
where
    G: FiniteGroup + Sync,
    G::Elem: Send + Sync,
{
    let k = t.class_count();
    let reps: Vec<u32> = t.classes().iter().map(|c| c[0]).collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(k.max(1));
    let columns: Vec<Vec<u32>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let reps = &reps;
                s.spawn(move || {
                    (w..k)
                        .step_by(workers)
                        .map(|l| {
                            let mut col = vec![0u32; k * k];
                            for x in 0..t.order() as u32 {
                                let i = t.class_of(x) as usize;
                                let j = t.class_of(t.mul(t.inverse(x), reps[l])) as usize;
                                col[i * k + j] += 1;
                            }
                            (l, col)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut cols = vec![Vec::new(); k];
        for h in handles {
            for (l, col) in h.join().expect("worker panicked") {
                cols[l] = col;
            }
        }
        cols
    });
    let mut c = vec![0u32; k * k * k];
    for (l, col) in columns.iter().enumerate() {
        for ij in 0..k * k {
            c[ij * k + l] = col[ij];
        }
    }
    c
}

/// Dense polynomial over `F_r`, ascending coefficients, no trailing zeros.
type FPoly = Vec<u64>;

fn trim(mut a: FPoly) -> FPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], r: u64) -> FPoly {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], r);
    while a.len() > db {
        let top = a.len() - 1;
        let f = a[top] * lead_inv % r;
        if f != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let idx = top - db + i;
                a[idx] = (a[idx] + r - f * bi % r) % r;
            }
        }
        a.pop();
        a = trim(a);
    }
    trim(a)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], r: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % r;
        }
    }
    poly_rem(&trim(out), m, r)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], r: u64) -> FPoly {
    let mut acc = poly_rem(&[1], m, r);
    let mut b = poly_rem(base, m, r);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, r);
        }
        b = poly_mulmod(&b, &b, m, r);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], r: u64) -> FPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let rem = poly_rem(&a, &b, r);
        a = b;
        b = rem;
    }
    if let Some(&lead) = a.last() {
        let s = inv_mod(lead, r);
        a.iter_mut().for_each(|x| *x = *x * s % r);
    }
    a
}

fn poly_div_exact(a: &[u64], b: &[u64], r: u64) -> FPoly {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], r);
    let mut q = vec![0u64; a.len() - db];
    for top in (db..a.len()).rev() {
        let f = rem[top] * lead_inv % r;
        q[top - db] = f;
        for (i, &bi) in b.iter().enumerate() {
            let idx = top - db + i;
            rem[idx] = (rem[idx] + r - f * bi % r) % r;
        }
    }
    trim(q)
}

fn poly_sub(a: &[u64], b: &[u64], r: u64) -> FPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + r - y) % r
            })
            .collect(),
    )
}

/// Distinct roots in `F_r` of `f`, by Cantor-Zassenhaus.
fn roots(f: &[u64], r: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    let xr = poly_powmod(&[0, 1], r, &f, r);
    let g = poly_gcd(&f, &poly_sub(&xr, &[0, 1], r), r);
    let mut out = Vec::new();
    let mut stack = vec![g];
    while let Some(h) = stack.pop() {
        match h.len() {
            0 | 1 => {}
            2 => out.push((r - h[0]) % r),
            _ => loop {
                let a = rng.gen_range(0..r);
                let s = poly_powmod(&[a, 1], (r - 1) / 2, &h, r);
                let d = poly_gcd(&h, &poly_sub(&s, &[1], r), r);
                if d.len() > 1 && d.len() < h.len() {
                    stack.push(poly_div_exact(&h, &d, r));
                    stack.push(d);
                    break;
                }
            },
        }
    }
    out.sort_unstable();
    out
}

/// Characteristic polynomial of an `m x m` matrix via Hessenberg form.
fn charpoly(mut h: Vec<Vec<u64>>, r: u64) -> FPoly {
    let m = h.len();
    for j in 0..m.saturating_sub(2) {
        let Some(piv) = (j + 1..m).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], r);
        for i in j + 2..m {
            let f = h[i][j] * inv % r;
            if f == 0 {
                continue;
            }
            let pivot_row = h[j + 1].clone();
            for (x, y) in h[i].iter_mut().zip(&pivot_row) {
                *x = (*x + r - f * y % r) % r;
            }
            for row in h.iter_mut() {
                row[j + 1] = (row[j + 1] + f * row[i]) % r;
            }
        }
    }
    let mut polys: Vec<FPoly> = vec![vec![1]];
    for k in 0..m {
        // (x - h_kk) p_k
        let pk = &polys[k];
        let mut next = vec![0u64; pk.len() + 1];
        for (i, &c) in pk.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % r;
            next[i] = (next[i] + r - c * h[k][k] % r) % r;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[i + 1][i] % r;
            let coef = h[i][k] * prod % r;
            if coef == 0 {
                continue;
            }
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = (next[t] + r - coef * c % r) % r;
            }
        }
        polys.push(next);
    }
    trim(polys.pop().expect("nonempty"))
}

/// Row-reduced basis of the span of `rows`, with pivot columns.
fn rref(mut rows: Vec<Vec<u64>>, r: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let width = rows.first().map_or(0, |v| v.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv_mod(rows[rank][col], r);
        rows[rank].iter_mut().for_each(|x| *x = *x * s % r);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if i == rank || f == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + r - f * y % r) % r;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Basis of the null space of an `m x m` matrix.
fn kernel(a: Vec<Vec<u64>>, r: u64) -> Vec<Vec<u64>> {
    let m = a.len();
    let (red, pivots) = rref(a, r);
    (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; m];
            v[free] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (r - row[free]) % r;
            }
            v
        })
        .collect()
}

struct ClassAlgebra {
    k: usize,
    c: Vec<u32>,
    r: u64,
}

impl ClassAlgebra {
    /// `(M_j v)_i = sum_l c_ijl v_l`.
    fn apply(&self, j: usize, v: &[u64]) -> Vec<u64> {
        let k = self.k;
        (0..k)
            .map(|i| {
                let base = (i * k + j) * k;
                self.c[base..base + k]
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&c, &x)| (acc + c as u64 * x) % self.r)
            })
            .collect()
    }

    /// Splits an invariant subspace (RREF basis) along the eigenspaces of `M_j`.
    fn split(
        &self,
        j: usize,
        basis: &[Vec<u64>],
        pivots: &[usize],
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<Vec<Vec<u64>>>> {
        let r = self.r;
        let m = basis.len();
        let images: Vec<Vec<u64>> = basis.iter().map(|b| self.apply(j, b)).collect();
        // restricted[c][a] = coordinate of M_j b_a along b_c
        let restricted: Vec<Vec<u64>> = pivots
            .iter()
            .map(|&pc| images.iter().map(|img| img[pc]).collect())
            .collect();
        let eigen = roots(&charpoly(restricted.clone(), r), r, rng);
        if eigen.len() <= 1 {
            return None;
        }
        let mut parts = Vec::new();
        for lambda in eigen {
            let mut shifted = restricted.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = (row[i] + r - lambda) % r;
            }
            let vecs: Vec<Vec<u64>> = kernel(shifted, r)
                .into_iter()
                .map(|y| {
                    let mut v = vec![0u64; self.k];
                    for (ya, b) in y.iter().zip(basis) {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi = (*vi + ya * bi) % r;
                        }
                    }
                    v
                })
                .collect();
            parts.push(vecs);
        }
        if parts.iter().map(Vec::len).sum::<usize>() != m {
            return None;
        }
        Some(parts)
    }
}

/// Exponent of the group: lcm of the orders of class representatives.
pub fn exponent<G: FiniteGroup>(t: &GroupTable<G>) -> u64 {
    t.classes()
        .iter()
        .map(|c| t.element_order(c[0]))
        .fold(1, |a, b| a.lcm(&b))
}

/// Multiset of irreducible character degrees.
pub fn dixon_degrees<G>(t: &GroupTable<G>) -> Result<DimensionMultiset, OracleError>
where
    G: FiniteGroup + Sync,
    G::Elem: Send + Sync,
{
    let order = t.order();
    let k = t.class_count();
    let r = dixon_prime(order, exponent(t))?;
    let algebra = ClassAlgebra {
        k,
        c: structure_constants(t),
        r,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1c0);

    let identity_class = t.class_of(t.identity()) as usize;
    let sizes = t.class_sizes();
    let inverse_class: Vec<usize> = t
        .classes()
        .iter()
        .map(|c| t.class_of(t.inverse(c[0])) as usize)
        .collect();

    let full: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut e = vec![0u64; k];
            e[i] = 1;
            e
        })
        .collect();
    let mut pending = vec![(full, (0..k).collect::<Vec<_>>())];
    let mut vectors = Vec::new();
    while let Some((basis, pivots)) = pending.pop() {
        if basis.len() == 1 {
            vectors.push(basis.into_iter().next().expect("one vector"));
            continue;
        }
        let parts = (0..k).find_map(|j| algebra.split(j, &basis, &pivots, &mut rng));
        let Some(parts) = parts else {
            return Err(OracleError::EigenvectorFailure(format!(
                "a {}-dimensional common eigenspace did not split",
                basis.len()
            )));
        };
        for vecs in parts {
            pending.push(rref(vecs, r));
        }
    }

    let mut degrees = DimensionMultiset::new();
    let bound = (order as f64).sqrt() as u64 + 1;
    for w in vectors {
        let lead = w[identity_class];
        if lead == 0 {
            return Err(OracleError::EigenvectorFailure(
                "eigenvector vanishes at 1".into(),
            ));
        }
        let s_inv = inv_mod(lead, r);
        let w: Vec<u64> = w.iter().map(|x| x * s_inv % r).collect();
        let sum = (0..k).fold(0u64, |acc, l| {
            let term = w[l] * w[inverse_class[l]] % r * inv_mod(sizes[l] % r, r) % r;
            (acc + term) % r
        });
        if sum == 0 {
            return Err(OracleError::EigenvectorFailure("zero norm".into()));
        }
        let d2 = order % r * inv_mod(sum, r) % r;
        let d = (1..=bound)
            .find(|&d| d * d <= order && order.is_multiple_of(d) && d * d % r == d2)
            .ok_or_else(|| {
                OracleError::EigenvectorFailure(format!("no degree with square {d2} mod {r}"))
            })?;
        degrees.insert(BigUint::from(d), BigUint::from(1u8));
    }

    let total: u64 = degrees.total().try_into().unwrap_or(u64::MAX);
    if total != k as u64 || degrees.sum_of_squares() != BigUint::from(order) {
        return Err(OracleError::EigenvectorFailure(format!(
            "degrees {degrees:?} inconsistent with {k} classes and order {order}"
        )));
    }
    Ok(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::groups::{ElementaryAbelian, MatrixGroup, MatrixShape};

    fn degrees<G>(g: G) -> Vec<(u64, u64)>
    where
        G: FiniteGroup + Sync,
        G::Elem: Send + Sync,
    {
        let t = GroupTable::build(g).unwrap();
        dixon_degrees(&t)
            .unwrap()
            .iter()
            .map(|(d, c)| (d.try_into().unwrap(), c.try_into().unwrap()))
            .collect()
    }

    #[test]
    fn known_groups() {
        assert_eq!(
            degrees(MatrixGroup::new(MatrixShape::General, 2, 2)),
            [(1, 2), (2, 1)]
        );
        assert_eq!(degrees(ElementaryAbelian::new(2, 3)), [(1, 8)]);
        assert_eq!(
            degrees(MatrixGroup::new(MatrixShape::TwoFixed, 3, 2)),
            [(1, 4), (2, 1)]
        );
        assert_eq!(
            degrees(MatrixGroup::new(MatrixShape::General, 2, 3)),
            [(1, 2), (2, 3), (3, 2), (4, 1)]
        );
        // GL_3(F_2) = PSL_2(F_7): 1, 3, 3, 6, 7, 8
        assert_eq!(
            degrees(MatrixGroup::new(MatrixShape::General, 3, 2)),
            [(1, 1), (3, 2), (6, 1), (7, 1), (8, 1)]
        );
    }

    #[test]
    fn prime_choice() {
        assert_eq!(dixon_prime(6, 6).unwrap(), 7);
        let r = dixon_prime(23328, 72).unwrap();
        assert!(r % 72 == 1 && r * r > 4 * 23328 && is_prime(r));
    }

    #[test]
    fn polynomial_helpers() {
        let r = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x-3)(x-5)^2(x-7)
        let f: Vec<u64> = [525i64, -460, 146, -20, 1]
            .iter()
            .map(|x| x.rem_euclid(r as i64) as u64)
            .collect();
        assert_eq!(roots(&f, r, &mut rng), [3, 5, 7]);
        let m = vec![vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, 9]];
        // (x-2)^2 (x-9)
        let cp = charpoly(m, r);
        assert_eq!(roots(&cp, r, &mut rng), [2, 9]);
        assert_eq!(cp.len(), 4);
    }
}
