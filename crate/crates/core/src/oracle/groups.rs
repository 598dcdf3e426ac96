//! Explicit finite groups, enumerated block by block.
//!
//! Every element is a flat `Vec<u16>`; the layout depends on the family.
//! Matrices are row-major over `F_p`.

use std::hash::Hash;

use super::ring::ResidueRing;

pub type Elem = Vec<u16>;

pub trait FiniteGroup {
    type Elem: Clone + Eq + Hash;

    /// Order predicted from the block parametrization.
    fn order(&self) -> u64;

    /// Every element, each exactly once.
    fn elements(&self) -> Vec<Self::Elem>;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        let id = self.identity();
        let mut prev = id.clone();
        let mut cur = a.clone();
        while cur != id {
            prev = cur.clone();
            cur = self.mul(&cur, a);
        }
        prev
    }
}

impl<G: FiniteGroup + ?Sized> FiniteGroup for Box<G> {
    type Elem = G::Elem;

    fn order(&self) -> u64 {
        (**self).order()
    }

    fn elements(&self) -> Vec<Self::Elem> {
        (**self).elements()
    }

    fn identity(&self) -> Self::Elem {
        (**self).identity()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).mul(a, b)
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        (**self).inverse(a)
    }
}

pub(crate) mod mat {
    /// `n x n` product over `F_p`.
    pub fn mul(n: usize, p: u32, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k] as u32;
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let o = &mut out[i * n + j];
                    *o = ((*o as u32 + aik * b[k * n + j] as u32) % p) as u16;
                }
            }
        }
        out
    }

    /// `A x` for a column `x`.
    pub fn apply(n: usize, p: u32, a: &[u16], x: &[u16]) -> Vec<u16> {
        (0..n)
            .map(|i| {
                ((0..n)
                    .map(|k| a[i * n + k] as u32 * x[k] as u32)
                    .sum::<u32>()
                    % p) as u16
            })
            .collect()
    }

    /// `y A` for a row `y`.
    pub fn apply_row(n: usize, p: u32, y: &[u16], a: &[u16]) -> Vec<u16> {
        (0..n)
            .map(|j| {
                ((0..n)
                    .map(|k| y[k] as u32 * a[k * n + j] as u32)
                    .sum::<u32>()
                    % p) as u16
            })
            .collect()
    }

    pub fn identity(n: usize) -> Vec<u16> {
        let mut m = vec![0u16; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        m
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Inverse by Gauss-Jordan, `None` if singular.
    pub fn inverse(n: usize, p: u32, a: &[u16]) -> Option<Vec<u16>> {
        let mut m: Vec<u32> = a.iter().map(|&x| x as u32).collect();
        let mut inv: Vec<u32> = identity(n).into_iter().map(u32::from).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r * n + col] != 0)?;
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
            let s = inv_mod(m[col * n + col], p);
            for j in 0..n {
                m[col * n + j] = m[col * n + j] * s % p;
                inv[col * n + j] = inv[col * n + j] * s % p;
            }
            for r in 0..n {
                let f = m[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    m[r * n + j] = (m[r * n + j] + (p - f) * m[col * n + j]) % p;
                    inv[r * n + j] = (inv[r * n + j] + (p - f) * inv[col * n + j]) % p;
                }
            }
        }
        Some(inv.into_iter().map(|x| x as u16).collect())
    }

    /// All vectors of length `len` over `F_p`, lexicographic.
    pub fn vectors(len: usize, p: u32) -> Vec<Vec<u16>> {
        let mut out = vec![Vec::with_capacity(len)];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..p as u16).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// `GL_n(F_p)`, built row by row keeping only rows independent of
    /// the previous ones.
    pub fn general_linear(n: usize, p: u32) -> Vec<Vec<u16>> {
        let rows = vectors(n, p);
        let mut partial: Vec<Vec<u16>> = vec![Vec::new()];
        for k in 0..n {
            let mut next = Vec::new();
            for m in &partial {
                let span = span_of(n, p, m, k);
                for r in &rows {
                    if !span.contains(r) {
                        let mut w = m.clone();
                        w.extend_from_slice(r);
                        next.push(w);
                    }
                }
            }
            partial = next;
        }
        partial
    }

    fn span_of(n: usize, p: u32, m: &[u16], k: usize) -> std::collections::HashSet<Vec<u16>> {
        let mut span = std::collections::HashSet::new();
        for coeffs in vectors(k, p) {
            let v: Vec<u16> = (0..n)
                .map(|j| {
                    ((0..k)
                        .map(|i| coeffs[i] as u32 * m[i * n + j] as u32)
                        .sum::<u32>()
                        % p) as u16
                })
                .collect();
            span.insert(v);
        }
        span
    }
}

pub fn gl_order_u64(n: usize, p: u64) -> u64 {
    let qn = p.pow(n as u32);
    (0..n as u32).map(|k| qn - p.pow(k)).product()
}

/// Which subgroup of `GL_n(F_p)` a [`MatrixGroup`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixShape {
    /// All of `GL_n`.
    General,
    /// First row `(1, 0, ..., 0)`.
    FirstRowFixed,
    /// First column `e_1`, second row `e_2^T`.
    TwoFixed,
}

#[derive(Debug, Clone)]
pub struct MatrixGroup {
    shape: MatrixShape,
    n: usize,
    p: u32,
}

impl MatrixGroup {
    pub fn new(shape: MatrixShape, n: usize, p: u32) -> Self {
        match shape {
            MatrixShape::FirstRowFixed => assert!(n >= 1),
            MatrixShape::TwoFixed => assert!(n >= 2),
            MatrixShape::General => {}
        }
        MatrixGroup { shape, n, p }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl FiniteGroup for MatrixGroup {
    type Elem = Elem;

    fn order(&self) -> u64 {
        let (n, p) = (self.n, self.p as u64);
        match self.shape {
            MatrixShape::General => gl_order_u64(n, p),
            MatrixShape::FirstRowFixed => p.pow(n as u32 - 1) * gl_order_u64(n - 1, p),
            MatrixShape::TwoFixed => p.pow(2 * n as u32 - 3) * gl_order_u64(n - 2, p),
        }
    }

    fn elements(&self) -> Vec<Elem> {
        let (n, p) = (self.n, self.p);
        match self.shape {
            MatrixShape::General => mat::general_linear(n, p),
            MatrixShape::FirstRowFixed => {
                let mut out = Vec::new();
                for y in mat::general_linear(n - 1, p) {
                    for v in mat::vectors(n - 1, p) {
                        let mut m = vec![0u16; n * n];
                        m[0] = 1;
                        for i in 1..n {
                            m[i * n] = v[i - 1];
                            for j in 1..n {
                                m[i * n + j] = y[(i - 1) * (n - 1) + (j - 1)];
                            }
                        }
                        out.push(m);
                    }
                }
                out
            }
            MatrixShape::TwoFixed => {
                let mut out = Vec::new();
                let k = n - 2;
                for y in mat::general_linear(k, p) {
                    for top in mat::vectors(n - 1, p) {
                        for col in mat::vectors(k, p) {
                            let mut m = vec![0u16; n * n];
                            m[0] = 1;
                            m[1..n].copy_from_slice(&top);
                            m[n + 1] = 1;
                            for i in 2..n {
                                m[i * n + 1] = col[i - 2];
                                for j in 2..n {
                                    m[i * n + j] = y[(i - 2) * k + (j - 2)];
                                }
                            }
                            out.push(m);
                        }
                    }
                }
                out
            }
        }
    }

    fn identity(&self) -> Elem {
        mat::identity(self.n)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        mat::mul(self.n, self.p, a, b)
    }

    fn inverse(&self, a: &Elem) -> Elem {
        mat::inverse(self.n, self.p, a).expect("group elements are invertible")
    }
}

/// `(F_p^n x F_p^n) : GL_n(F_p)` with `D` acting on columns `v` by `D v`
/// and on rows `w` by `w D^{-1}`.
///
/// Layout: `v (n) | w (n) | D (n^2) | D^{-1} (n^2)`.
#[derive(Debug, Clone)]
pub struct SemidirectGroup {
    n: usize,
    p: u32,
}

impl SemidirectGroup {
    pub fn new(n: usize, p: u32) -> Self {
        SemidirectGroup { n, p }
    }

    fn split<'a>(&self, x: &'a [u16]) -> (&'a [u16], &'a [u16], &'a [u16], &'a [u16]) {
        let n = self.n;
        let (v, rest) = x.split_at(n);
        let (w, rest) = rest.split_at(n);
        let (d, dinv) = rest.split_at(n * n);
        (v, w, d, dinv)
    }
}

fn add_vec(p: u32, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u16)
        .collect()
}

impl FiniteGroup for SemidirectGroup {
    type Elem = Elem;

    fn order(&self) -> u64 {
        (self.p as u64).pow(2 * self.n as u32) * gl_order_u64(self.n, self.p as u64)
    }

    fn elements(&self) -> Vec<Elem> {
        let (n, p) = (self.n, self.p);
        let vs = mat::vectors(n, p);
        let mut out = Vec::new();
        for d in mat::general_linear(n, p) {
            let dinv = mat::inverse(n, p, &d).expect("invertible");
            for v in &vs {
                for w in &vs {
                    let mut e = Vec::with_capacity(2 * n + 2 * n * n);
                    e.extend_from_slice(v);
                    e.extend_from_slice(w);
                    e.extend_from_slice(&d);
                    e.extend_from_slice(&dinv);
                    out.push(e);
                }
            }
        }
        out
    }

    fn identity(&self) -> Elem {
        let n = self.n;
        let mut e = vec![0u16; 2 * n];
        e.extend(mat::identity(n));
        e.extend(mat::identity(n));
        e
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let (n, p) = (self.n, self.p);
        let (v1, w1, d1, d1i) = self.split(a);
        let (v2, w2, d2, d2i) = self.split(b);
        let mut e = add_vec(p, v1, &mat::apply(n, p, d1, v2));
        e.extend(add_vec(p, w1, &mat::apply_row(n, p, w2, d1i)));
        e.extend(mat::mul(n, p, d1, d2));
        e.extend(mat::mul(n, p, d2i, d1i));
        e
    }
}

/// `Aut(o_l + o_1^n)` as block matrices `(u, r; c, A)` with `u` a unit of
/// `o_l`, `r` a row with entries in `p^(l-1) o_l`, `c` a column over `o_1`
/// and `A` in `GL_n(o_1)`.
///
/// Layout: `u | r (n) | c (n) | A (n^2)`, where `r` stores the `F_p`
/// coordinates of its entries with respect to the socle generator.
#[derive(Debug, Clone)]
pub struct LocalAutGroup {
    ring: ResidueRing,
    n: usize,
}

impl LocalAutGroup {
    pub fn new(ring: ResidueRing, n: usize) -> Self {
        LocalAutGroup { ring, n }
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }
}

impl FiniteGroup for LocalAutGroup {
    type Elem = Elem;

    fn order(&self) -> u64 {
        let p = self.ring.p() as u64;
        self.ring.unit_count() as u64 * p.pow(2 * self.n as u32) * gl_order_u64(self.n, p)
    }

    fn elements(&self) -> Vec<Elem> {
        let (n, p) = (self.n, self.ring.p());
        let vs = mat::vectors(n, p);
        let gl = mat::general_linear(n, p);
        let mut out = Vec::new();
        for u in self.ring.units() {
            for r in &vs {
                for c in &vs {
                    for a in &gl {
                        let mut e = Vec::with_capacity(1 + 2 * n + n * n);
                        e.push(u as u16);
                        e.extend_from_slice(r);
                        e.extend_from_slice(c);
                        e.extend_from_slice(a);
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    fn identity(&self) -> Elem {
        let n = self.n;
        let mut e = vec![1u16];
        e.extend(vec![0u16; 2 * n]);
        e.extend(mat::identity(n));
        e
    }

    // (u,r;c,A)(u',r';c',A') = (uu' + r.c', u r' + r A'; c u'bar + A c', A A')
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let (n, ring) = (self.n, &self.ring);
        let p = ring.p();
        let (u1, r1, c1, a1) = (
            a[0] as u32,
            &a[1..1 + n],
            &a[1 + n..1 + 2 * n],
            &a[1 + 2 * n..],
        );
        let (u2, r2, c2, a2) = (
            b[0] as u32,
            &b[1..1 + n],
            &b[1 + n..1 + 2 * n],
            &b[1 + 2 * n..],
        );
        let pairing = (0..n).map(|i| r1[i] as u32 * c2[i] as u32).sum::<u32>() % p;
        let twist = ring.mul(ring.socle_generator(), ring.lift(pairing));
        let u = ring.add(ring.mul(u1, u2), twist);
        let (u1bar, u2bar) = (ring.reduce(u1), ring.reduce(u2));
        let ur: Vec<u16> = r2
            .iter()
            .map(|&x| ((u1bar * x as u32) % p) as u16)
            .collect();
        let r = add_vec(p, &ur, &mat::apply_row(n, p, r1, a2));
        let cu: Vec<u16> = c1
            .iter()
            .map(|&x| ((x as u32 * u2bar) % p) as u16)
            .collect();
        let c = add_vec(p, &cu, &mat::apply(n, p, a1, c2));
        let mut e = Vec::with_capacity(a.len());
        e.push(u as u16);
        e.extend(r);
        e.extend(c);
        e.extend(mat::mul(n, p, a1, a2));
        e
    }
}

/// `F_p^k` under addition; used as a sanity group.
#[derive(Debug, Clone)]
pub struct ElementaryAbelian {
    p: u32,
    rank: usize,
}

impl ElementaryAbelian {
    pub fn new(p: u32, rank: usize) -> Self {
        ElementaryAbelian { p, rank }
    }
}

impl FiniteGroup for ElementaryAbelian {
    type Elem = Elem;

    fn order(&self) -> u64 {
        (self.p as u64).pow(self.rank as u32)
    }

    fn elements(&self) -> Vec<Elem> {
        mat::vectors(self.rank, self.p)
    }

    fn identity(&self) -> Elem {
        vec![0; self.rank]
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        add_vec(self.p, a, b)
    }
}
