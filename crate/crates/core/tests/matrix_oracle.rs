//! Brute-force check of structure constants and triple symbols against
//! explicit matrix models of sl(3), sl(4) and sp(4).
//!
//! Everything here is computed from matrices: the Killing form is
//! tr(ad X ad Y) in a basis of the algebra, N_{α,β} is read off from
//! [E_α, E_β] = N_{α,β} E_{α+β} with B(E_α, E_{−α}) = 1, and [ijk] is the
//! basis-free contraction −Σ B([e_a,e_b],e_c)·B([e^a,e^b],e^c) over dual
//! bases of the complexified summands.

use std::collections::BTreeMap;

use flagherm::curvature::triple_symbol;
use flagherm::flagspace::{build_flag, FlagSpace};
use flagherm::rootsys::{build_root_system, Root, RootSystem, RootSystemSpec};
use flagherm::Q;
use num_traits::{One, Zero};

type Mat = Vec<Vec<Q>>;

fn zero(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = zero(n);
    m[i][j] = Q::one();
    m
}

fn add(a: &Mat, b: &Mat, k: &Q) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y * k).collect()).collect()
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

fn bracket(a: &Mat, b: &Mat) -> Mat {
    add(&mul(a, b), &mul(b, a), &-Q::one())
}

fn scale(a: &Mat, k: &Q) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

/// Inverse of a square rational matrix by Gauss–Jordan.
fn inverse(m: &Mat) -> Mat {
    let n = m.len();
    let mut a: Mat = m.iter().enumerate().map(|(i, r)| {
        let mut row = r.clone();
        row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
        row
    }).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular");
        a.swap(col, p);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// A matrix Lie algebra with a root-vector basis.
struct Model {
    rs: RootSystem,
    /// root vectors keyed by simple-root coefficients, then Cartan elements
    roots: Vec<(Root, Mat)>,
    basis: Vec<Mat>,
    coord: Mat,
    killing: Mat,
}

impl Model {
    fn new(rs: RootSystem, roots: Vec<(Root, Mat)>, cartan: Vec<Mat>) -> Model {
        let mut basis: Vec<Mat> = roots.iter().map(|(_, m)| m.clone()).collect();
        basis.extend(cartan);
        let flat: Vec<Vec<Q>> = basis.iter().map(|m| m.concat()).collect();
        // coordinates via the normal equations: c = (AᵀA)⁻¹Aᵀ vec(Y)
        let gram: Mat = flat.iter().map(|u| flat.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect()).collect();
        let g_inv = inverse(&gram);
        let coord: Mat = g_inv
            .iter()
            .map(|row| (0..flat[0].len()).map(|k| row.iter().zip(&flat).map(|(g, f)| g * &f[k]).sum()).collect())
            .collect();
        let mut model = Model { rs, roots, basis, coord, killing: vec![] };
        let ads: Vec<Mat> = model.basis.iter().map(|x| model.ad(x)).collect();
        model.killing = ads.iter().map(|a| ads.iter().map(|b| trace(&mul(a, b))).collect()).collect();
        model
    }

    fn coords(&self, y: &Mat) -> Vec<Q> {
        let v = y.concat();
        let c: Vec<Q> = self.coord.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        // the element must actually lie in the span
        let back = c.iter().zip(&self.basis).fold(zero(y.len()), |acc, (k, b)| add(&acc, b, k));
        assert_eq!(&back, y, "bracket left the algebra");
        c
    }

    /// ad x in the basis, columns are images of basis elements
    fn ad(&self, x: &Mat) -> Mat {
        let cols: Vec<Vec<Q>> = self.basis.iter().map(|b| self.coords(&bracket(x, b))).collect();
        let d = self.basis.len();
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    fn b(&self, x: &Mat, y: &Mat) -> Q {
        let (cx, cy) = (self.coords(x), self.coords(y));
        let mut acc = Q::zero();
        for (i, a) in cx.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in cy.iter().enumerate() {
                acc += a * c * &self.killing[i][j];
            }
        }
        acc
    }

    /// Root vectors rescaled so that B(E_α, E_{−α}) = 1.
    fn normalized(&self) -> BTreeMap<Vec<i32>, Mat> {
        let by: BTreeMap<Vec<i32>, Mat> = self.roots.iter().map(|(r, m)| (r.0.clone(), m.clone())).collect();
        let mut out = BTreeMap::new();
        for (r, m) in &by {
            if Root(r.clone()).is_positive() {
                let neg: Vec<i32> = r.iter().map(|c| -c).collect();
                let c = self.b(m, &by[&neg]);
                assert!(!c.is_zero());
                out.insert(r.clone(), m.clone());
                out.insert(neg.clone(), scale(&by[&neg], &(Q::one() / c)));
            }
        }
        out
    }

    fn check_structure_constants(&self) -> usize {
        let e = self.normalized();
        let mut checked = 0;
        for a in self.rs.all_roots() {
            for b in self.rs.all_roots() {
                let sum: Vec<i32> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                if !e.contains_key(&sum) {
                    continue;
                }
                let n = |x: &Root, y: &Root, s: &[i32]| {
                    let c = self.coords(&bracket(&e[&x.0], &e[&y.0]));
                    let idx = self.roots.iter().position(|(r, _)| r.0 == s).unwrap();
                    // E_{α+β} may carry the 1/B rescaling
                    let ratio = self.coords(&e[s]);
                    c[idx].clone() / &ratio[idx]
                };
                let neg = |r: &Root| Root(r.0.iter().map(|c| -c).collect());
                let msum: Vec<i32> = sum.iter().map(|c| -c).collect();
                let oracle = -(n(a, b, &sum) * n(&neg(a), &neg(b), &msum));
                assert_eq!(self.rs.structure_constant_sq(a, b).unwrap(), oracle, "m² mismatch at {:?},{:?}", a.0, b.0);
                checked += 1;
            }
        }
        checked
    }

    fn check_triple_symbols(&self, fs: &FlagSpace) {
        let s = fs.summand_count();
        // complexified basis of each summand and its B-dual
        let mut bases: Vec<Vec<Mat>> = vec![vec![]; s];
        for (r, m) in &self.roots {
            if let Some(i) = fs.summand_of(r) {
                bases[i].push(m.clone());
            }
        }
        let duals: Vec<Vec<Mat>> = bases
            .iter()
            .map(|b| {
                let g: Mat = b.iter().map(|x| b.iter().map(|y| self.b(x, y)).collect()).collect();
                let gi = inverse(&g);
                (0..b.len())
                    .map(|a| gi[a].iter().zip(b).fold(zero(b[0].len()), |acc, (k, y)| add(&acc, y, k)))
                    .collect()
            })
            .collect();
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let mut acc = Q::zero();
                    for (xa, ya) in bases[i].iter().zip(&duals[i]) {
                        for (xb, yb) in bases[j].iter().zip(&duals[j]) {
                            let (p, q) = (bracket(xa, xb), bracket(ya, yb));
                            for (xc, yc) in bases[k].iter().zip(&duals[k]) {
                                acc -= self.b(&p, xc) * self.b(&q, yc);
                            }
                        }
                    }
                    assert_eq!(triple_symbol(fs, i, j, k), acc, "[{i}{j}{k}] mismatch");
                }
            }
        }
    }
}

fn trace(m: &Mat) -> Q {
    (0..m.len()).map(|i| m[i][i].clone()).sum()
}

/// sl(n): E_ij has weight e_i − e_j = α_i + … + α_{j−1}.
fn sl(n: usize) -> Model {
    let rs = build_root_system(RootSystemSpec::a(n - 1)).unwrap();
    let mut roots = vec![];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut c = vec![0; n - 1];
                let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
                for x in c.iter_mut().take(hi).skip(lo) {
                    *x = sign;
                }
                roots.push((Root(c), unit(n, i, j)));
            }
        }
    }
    let cartan = (0..n - 1).map(|k| add(&unit(n, k, k), &unit(n, k + 1, k + 1), &-Q::one())).collect();
    Model::new(rs, roots, cartan)
}

/// sp(4) as [[A, B], [C, −Aᵀ]] with B, C symmetric; α₁ = e₁ − e₂, α₂ = 2e₂.
fn sp4() -> Model {
    let rs = build_root_system(RootSystemSpec::c(2)).unwrap();
    let m = |parts: &[(usize, usize, i64)]| {
        let mut x = zero(4);
        for &(i, j, v) in parts {
            x[i][j] = Q::from_integer(v.into());
        }
        x
    };
    let roots = vec![
        (Root(vec![1, 0]), m(&[(0, 1, 1), (3, 2, -1)])),
        (Root(vec![-1, 0]), m(&[(1, 0, 1), (2, 3, -1)])),
        (Root(vec![0, 1]), m(&[(1, 3, 1)])),
        (Root(vec![0, -1]), m(&[(3, 1, 1)])),
        (Root(vec![1, 1]), m(&[(0, 3, 1), (1, 2, 1)])),
        (Root(vec![-1, -1]), m(&[(3, 0, 1), (2, 1, 1)])),
        (Root(vec![2, 1]), m(&[(0, 2, 1)])),
        (Root(vec![-2, -1]), m(&[(2, 0, 1)])),
    ];
    let cartan = vec![m(&[(0, 0, 1), (2, 2, -1)]), m(&[(1, 1, 1), (3, 3, -1)])];
    Model::new(rs, roots, cartan)
}

#[test]
fn sl3_structure_constants_and_symbols() {
    let model = sl(3);
    // the model's own Killing form is 2n·tr(XY)
    assert_eq!(model.b(&unit(3, 0, 1), &unit(3, 1, 0)), Q::from_integer(6.into()));
    assert_eq!(model.check_structure_constants(), 12);
    let fs = build_flag(model.rs.clone(), &[]).unwrap();
    model.check_triple_symbols(&fs);
    assert_eq!(triple_symbol(&fs, 0, 1, 2), Q::new(1.into(), 3.into()));
}

#[test]
fn sl4_structure_constants_and_symbols() {
    let model = sl(4);
    assert!(model.check_structure_constants() > 0);
    model.check_triple_symbols(&build_flag(model.rs.clone(), &[]).unwrap());
    // a partial flag too: SU(4)/S(U(2)×U(1)×U(1))
    model.check_triple_symbols(&build_flag(model.rs.clone(), &[0]).unwrap());
}

#[test]
fn sp4_structure_constants_and_symbols() {
    let model = sp4();
    // Killing form of sp(2n) is (2n+2)·tr(XY)
    let e = &model.roots[6].1;
    let f = &model.roots[7].1;
    assert_eq!(model.b(e, f), Q::from_integer(6.into()) * trace(&mul(e, f)));
    assert!(model.check_structure_constants() > 0);
    model.check_triple_symbols(&build_flag(model.rs.clone(), &[]).unwrap());
    model.check_triple_symbols(&build_flag(model.rs.clone(), &[1]).unwrap());
}
