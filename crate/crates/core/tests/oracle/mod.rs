//! Brute-force cochain computations with their own mod-p arithmetic.
//! Nothing here calls into the library, so agreement is a real cross-check.

#![allow(dead_code)]

pub type Vector = Vec<u64>;

/// Row reduction mod `p`; returns the reduced rows and pivot columns.
pub fn rref(rows: &[Vector], cols: usize, p: u64) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, i);
        let inv = pow(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn rank(rows: &[Vector], cols: usize, p: u64) -> usize {
    rref(rows, cols, p).1.len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows.
pub fn kernel(rows: &[Vector], cols: usize, p: u64) -> Vec<Vector> {
    let (m, pivots) = rref(rows, cols, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// A finite monoid by its table; `table[a][b]` is `a` followed by `b`.
#[derive(Debug, Clone)]
pub struct Monoid {
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

impl Monoid {
    pub fn size(&self) -> usize {
        self.table.len()
    }
}

/// Cochain differential `C^n -> C^{n+1}` of the nerve of a monoid with
/// coefficients in `V`, where `action[a]` is the matrix of `V(a)`. Rows are
/// indexed by `(tuple, coordinate)`.
fn differential(m: &Monoid, action: &[Vec<Vector>], dim: usize, n: usize, p: u64) -> Vec<Vector> {
    let s = m.size();
    let tuples = |k: usize| s.pow(k as u32);
    let decode = |mut t: usize, k: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            out.push(t % s);
            t /= s;
        }
        out
    };
    let encode = |xs: &[usize]| xs.iter().rev().fold(0, |acc, &x| acc * s + x);
    let cols = tuples(n) * dim;
    let mut rows = Vec::new();
    for t in 0..tuples(n + 1) {
        let fs = decode(t, n + 1);
        for a in 0..dim {
            let mut row = vec![0u64; cols];
            // first face, twisted by the coefficients
            let c0 = encode(&fs[1..]);
            for b in 0..dim {
                row[c0 * dim + b] = (row[c0 * dim + b] + action[fs[0]][a][b]) % p;
            }
            for i in 1..=n {
                let mut face = fs[..i - 1].to_vec();
                face.push(m.table[fs[i - 1]][fs[i]]);
                face.extend_from_slice(&fs[i + 1..]);
                let c = encode(&face) * dim + a;
                row[c] = (row[c] + if i % 2 == 0 { 1 } else { p - 1 }) % p;
            }
            let c = encode(&fs[..n]) * dim + a;
            row[c] = (row[c] + if (n + 1).is_multiple_of(2) { 1 } else { p - 1 }) % p;
            rows.push(row);
        }
    }
    rows
}

/// `dim H^i(M; V)` for `i <= top`.
pub fn monoid_cohomology(m: &Monoid, action: &[Vec<Vector>], dim: usize, p: u64, top: usize) -> Vec<usize> {
    let s = m.size();
    let dims: Vec<usize> = (0..=top + 1).map(|k| s.pow(k as u32) * dim).collect();
    let ranks: Vec<usize> = (0..=top).map(|n| rank(&differential(m, action, dim, n, p), dims[n], p)).collect();
    (0..=top).map(|n| dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
}

pub fn trivial_action(m: &Monoid, dim: usize) -> Vec<Vec<Vector>> {
    let id: Vec<Vector> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    vec![id; m.size()]
}

/// `H^q(G; k)` for a group `G` with trivial coefficients, as representatives
/// of a basis together with a basis of coboundaries.
pub struct Classes {
    pub reps: Vec<Vector>,
    pub boundaries: Vec<Vector>,
    pub cols: usize,
}

fn transpose(rows: &[Vector], cols: usize) -> Vec<Vector> {
    (0..cols).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

pub fn group_classes(g: &Monoid, p: u64, q: usize) -> Classes {
    let triv = trivial_action(g, 1);
    let cols = g.size().pow(q as u32);
    let d = differential(g, &triv, 1, q, p);
    let cocycles = kernel(&d, cols, p);
    let boundaries = if q == 0 {
        Vec::new()
    } else {
        // columns of the previous differential span the coboundaries
        let prev = differential(g, &triv, 1, q - 1, p);
        let (b, _) = rref(&transpose(&prev, g.size().pow(q as u32 - 1)), cols, p);
        b
    };
    let mut span = boundaries.clone();
    let mut reps = Vec::new();
    for z in cocycles {
        let mut trial = span.clone();
        trial.push(z.clone());
        if rank(&trial, cols, p) > span.len() {
            span = rref(&trial, cols, p).0;
            reps.push(z);
        }
    }
    Classes { reps, boundaries, cols }
}

impl Classes {
    /// Coordinates of a cocycle in the basis `reps`, modulo coboundaries.
    pub fn coordinates(&self, v: &[u64], p: u64) -> Vector {
        let h = self.reps.len();
        let b = self.boundaries.len();
        // Solve Σ x_i reps_i + Σ y_j bound_j = v by reducing [R | B | v]^T.
        let mut rows: Vec<Vector> = Vec::new();
        for c in 0..self.cols {
            let mut row: Vector = self.reps.iter().map(|r| r[c]).collect();
            row.extend(self.boundaries.iter().map(|r| r[c]));
            row.push(v[c] % p);
            rows.push(row);
        }
        let (m, pivots) = rref(&rows, h + b + 1, p);
        assert!(!pivots.contains(&(h + b)), "not a cocycle");
        let mut x = vec![0; h];
        for (row, &pc) in m.iter().zip(&pivots) {
            if pc < h {
                x[pc] = row[h + b];
            }
        }
        x
    }
}

/// Matrix of `c -> c(α g1, ..., α gq)` on `H^q(G; k)`.
pub fn induced_on_classes(g: &Monoid, classes: &Classes, alpha: &[usize], q: usize, p: u64) -> Vec<Vector> {
    let s = g.size();
    let decode = |mut t: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(q);
        for _ in 0..q {
            out.push(t % s);
            t /= s;
        }
        out
    };
    let encode = |xs: &[usize]| xs.iter().rev().fold(0, |acc, &x| acc * s + x);
    let h = classes.reps.len();
    let mut columns = Vec::new();
    for rep in &classes.reps {
        let pulled: Vector = (0..classes.cols).map(|t| rep[encode(&decode(t).iter().map(|&x| alpha[x]).collect::<Vec<_>>())]).collect();
        columns.push(classes.coordinates(&pulled, p));
    }
    (0..h).map(|i| columns.iter().map(|c| c[i]).collect()).collect()
}

/// The one-object fixture with `A = F_2`, `N = F_2`, constant coefficients:
/// base monoid `Gr(A) = {0, 1}` under multiplication, fiber `Z/2`, and
/// `Gr(A, N) = {(r, m)}` with `(r, m)(s, n) = (rs, n + m s)`.
pub struct PointFixture {
    pub base: Monoid,
    pub fiber: Monoid,
    pub total: Monoid,
}

impl PointFixture {
    pub fn new() -> Self {
        let base = Monoid { table: vec![vec![0, 0], vec![0, 1]], unit: 1 };
        let fiber = Monoid { table: vec![vec![0, 1], vec![1, 0]], unit: 0 };
        let idx = |r: usize, m: usize| r + 2 * m;
        let mut table = vec![vec![0; 4]; 4];
        for r in 0..2 {
            for m in 0..2 {
                for s in 0..2 {
                    for n in 0..2 {
                        table[idx(r, m)][idx(s, n)] = idx(r * s, (n + m * s) % 2);
                    }
                }
            }
        }
        PointFixture { base, fiber, total: Monoid { table, unit: idx(1, 0) } }
    }

    /// `e2[q][p]` computed as `H^p(Gr(A); H^q(Z/2; k))`.
    pub fn e2(&self, cap_p: usize, cap_q: usize) -> Vec<Vec<usize>> {
        (0..=cap_q)
            .map(|q| {
                let classes = group_classes(&self.fiber, 2, q);
                let h = classes.reps.len();
                // r acts on the fiber by m -> m r
                let action: Vec<Vec<Vector>> = (0..2).map(|r| induced_on_classes(&self.fiber, &classes, &[0, r], q, 2)).collect();
                if h == 0 {
                    return vec![0; cap_p + 1];
                }
                monoid_cohomology(&self.base, &action, h, 2, cap_p)
            })
            .collect()
    }

    pub fn abutment(&self, cap_n: usize) -> Vec<usize> {
        monoid_cohomology(&self.total, &trivial_action(&self.total, 1), 1, 2, cap_n)
    }
}

/// `Z/n1 x ... x Z/nk` as a monoid table, mixed radix with the first factor least significant.
pub fn abelian_group(orders: &[usize]) -> Monoid {
    let size: usize = orders.iter().product();
    let digits = |mut e: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&o| {
                let d = e % o;
                e /= o;
                d
            })
            .collect()
    };
    let undigits = |d: &[usize]| d.iter().zip(orders).rev().fold(0, |acc, (&x, &o)| acc * o + x);
    let table = (0..size)
        .map(|a| (0..size).map(|b| undigits(&digits(a).iter().zip(digits(b)).zip(orders).map(|((x, y), o)| (x + y) % o).collect::<Vec<_>>())).collect())
        .collect();
    Monoid { table, unit: 0 }
}

/// `<t | t^(index+period) = t^index>` with elements `t^0 .. t^(index+period-1)`.
pub fn cyclic_monoid(index: usize, period: usize) -> Monoid {
    let size = index + period;
    let reduce = |e: usize| if e < size { e } else { index + (e - index) % period };
    Monoid { table: (0..size).map(|a| (0..size).map(|b| reduce(a + b)).collect()).collect(), unit: 0 }
}
