use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use super::dyadic::DyadicGaussian;
use super::scalar::Scalar;
use crate::error::WalkError;

/// Two-component amplitude `[Ψ_L, Ψ_R]`.
pub type Amplitude<S> = [S; 2];

/// A 2×2 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<S> {
    pub entries: [[S; 2]; 2],
}

/// Exact coin matrices: H, P, Q, R, S, J and every Ξ(l, m).
pub type CoinMatrix = Mat2<DyadicGaussian>;

impl<S: Scalar> Mat2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Self { entries: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row][col]
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Mat2<T> {
        let [[a, b], [c, d]] = &self.entries;
        Mat2 { entries: [[f(a), f(b)], [f(c), f(d)]] }
    }

    /// Re-express an exact matrix in another backend.
    pub fn from_coin(m: &CoinMatrix) -> Self {
        m.map(S::from_dyadic)
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k)
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new(a.clone(), c.clone(), b.clone(), d.clone())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().map(S::conj)
    }

    pub fn trace(&self) -> S {
        self.entries[0][0].clone() + &self.entries[1][1]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(S::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries[0][1] == self.entries[1][0]
    }

    pub fn apply(&self, v: &Amplitude<S>) -> Amplitude<S> {
        let [[a, b], [c, d]] = &self.entries;
        [a.clone() * &v[0] + &(b.clone() * &v[1]), c.clone() * &v[0] + &(d.clone() * &v[1])]
    }

    /// `v* M v`, the Hermitian form of `M` at `v`.
    pub fn quadratic(&self, v: &Amplitude<S>) -> S {
        let mv = self.apply(v);
        v[0].conj() * &mv[0] + &(v[1].conj() * &mv[1])
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| {
            self.entries[i][0].clone() * &o.entries[0][j] + &(self.entries[i][1].clone() * &o.entries[1][j])
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    fn zip(&self, o: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let e = |i: usize, j: usize| f(&self.entries[i][j], &o.entries[i][j]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<S: Scalar> Mul<&Mat2<S>> for &Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, rhs: &Mat2<S>) -> Mat2<S> {
        self.mul_ref(rhs)
    }
}

impl<S: Scalar> Mul for Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, rhs: Mat2<S>) -> Mat2<S> {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar> Add<&Mat2<S>> for &Mat2<S> {
    type Output = Mat2<S>;
    fn add(self, rhs: &Mat2<S>) -> Mat2<S> {
        self.zip(rhs, |a, b| a.clone() + b)
    }
}

impl<S: Scalar> Add for Mat2<S> {
    type Output = Mat2<S>;
    fn add(self, rhs: Mat2<S>) -> Mat2<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub<&Mat2<S>> for &Mat2<S> {
    type Output = Mat2<S>;
    fn sub(self, rhs: &Mat2<S>) -> Mat2<S> {
        self.zip(rhs, |a, b| a.clone() - b)
    }
}

impl<S: Scalar> Sub for Mat2<S> {
    type Output = Mat2<S>;
    fn sub(self, rhs: Mat2<S>) -> Mat2<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Mat2<S> {
    type Output = Mat2<S>;
    fn neg(self) -> Mat2<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> fmt::Display for Mat2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", a.render(), b.render(), c.render(), d.render())
    }
}

impl<S: Scalar> Mat2<S> {
    /// Entries rendered row by row, as emitted in JSON reports.
    pub fn rendered(&self) -> [[String; 2]; 2] {
        let [[a, b], [c, d]] = &self.entries;
        [[a.render(), b.render()], [c.render(), d.render()]]
    }
}

/// The named constant matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoinName {
    H,
    P,
    Q,
    R,
    S,
    J,
    I,
    Zero,
}

impl CoinName {
    pub const BASIS: [CoinName; 4] = [CoinName::P, CoinName::Q, CoinName::R, CoinName::S];

    pub fn symbol(self) -> &'static str {
        match self {
            CoinName::H => "H",
            CoinName::P => "P",
            CoinName::Q => "Q",
            CoinName::R => "R",
            CoinName::S => "S",
            CoinName::J => "J",
            CoinName::I => "I",
            CoinName::Zero => "0",
        }
    }

    pub fn matrix(self) -> CoinMatrix {
        coin_constant(self)
    }
}

impl fmt::Display for CoinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for CoinName {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, WalkError> {
        Ok(match s.trim() {
            "H" => CoinName::H,
            "P" => CoinName::P,
            "Q" => CoinName::Q,
            "R" => CoinName::R,
            "S" => CoinName::S,
            "J" => CoinName::J,
            "I" => CoinName::I,
            "0" => CoinName::Zero,
            other => return Err(WalkError::UnknownCoin(other.to_string())),
        })
    }
}

fn over_sqrt2(a: i64, b: i64, c: i64, d: i64) -> CoinMatrix {
    let e = |v: i64| DyadicGaussian::new(v, 0, 1);
    Mat2::new(e(a), e(b), e(c), e(d))
}

/// Exact entries of the named matrix.
pub fn coin_constant(name: CoinName) -> CoinMatrix {
    let int = |a: i64, b: i64, c: i64, d: i64| {
        Mat2::new(DyadicGaussian::from_int(a), DyadicGaussian::from_int(b), DyadicGaussian::from_int(c), DyadicGaussian::from_int(d))
    };
    match name {
        CoinName::H => over_sqrt2(1, 1, 1, -1),
        CoinName::P => over_sqrt2(1, 1, 0, 0),
        CoinName::Q => over_sqrt2(0, 0, 1, -1),
        CoinName::R => over_sqrt2(1, -1, 0, 0),
        CoinName::S => over_sqrt2(0, 0, 1, 1),
        CoinName::J => int(0, -1, 1, 0),
        CoinName::I => int(1, 0, 0, 1),
        CoinName::Zero => int(0, 0, 0, 0),
    }
}

/// Look up a constant by its symbol.
pub fn coin_by_name(name: &str) -> Result<CoinMatrix, WalkError> {
    name.parse::<CoinName>().map(coin_constant)
}

/// One cell of the P/Q/R/S product table: `row · col = sign · entry / √2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub row: CoinName,
    pub col: CoinName,
    pub negated: bool,
    pub entry: CoinName,
    pub holds: bool,
}

/// The product table with the common 1/√2 factor omitted.
pub const PRODUCT_TABLE: [[(bool, CoinName); 4]; 4] = {
    use CoinName::{P, Q, R, S};
    [
        [(false, P), (false, R), (false, R), (false, P)],
        [(false, S), (true, Q), (false, Q), (true, S)],
        [(false, P), (true, R), (false, R), (true, P)],
        [(false, S), (false, Q), (false, Q), (false, S)],
    ]
};

/// Checks all sixteen products of the basis against the table.
pub fn verify_table() -> Vec<TableCell> {
    let inv_sqrt2 = DyadicGaussian::inv_sqrt2_pow(1);
    let mut cells = Vec::with_capacity(16);
    for (i, &row) in CoinName::BASIS.iter().enumerate() {
        for (j, &col) in CoinName::BASIS.iter().enumerate() {
            let (negated, entry) = PRODUCT_TABLE[i][j];
            let mut expected = entry.matrix().scale(&inv_sqrt2);
            if negated {
                expected = -expected;
            }
            let holds = &row.matrix() * &col.matrix() == expected;
            cells.push(TableCell { row, col, negated, entry, holds });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(name: CoinName) -> CoinMatrix {
        name.matrix()
    }

    fn inv_sqrt2() -> DyadicGaussian {
        DyadicGaussian::inv_sqrt2_pow(1)
    }

    #[test]
    fn constants_as_printed() {
        assert_eq!(m(CoinName::P), over_sqrt2(1, 1, 0, 0));
        assert_eq!(m(CoinName::R), over_sqrt2(1, -1, 0, 0));
        assert_eq!(coin_by_name("J").unwrap().to_string(), "[[0+0i/√2^0, -1+0i/√2^0], [1+0i/√2^0, 0+0i/√2^0]]");
        assert_eq!(m(CoinName::H), &m(CoinName::P) + &m(CoinName::Q));
        // R = √2 PQ and S = √2 QP
        let sqrt2 = DyadicGaussian::new(2, 0, 1);
        assert_eq!((&m(CoinName::P) * &m(CoinName::Q)).scale(&sqrt2), m(CoinName::R));
        assert_eq!((&m(CoinName::Q) * &m(CoinName::P)).scale(&sqrt2), m(CoinName::S));
    }

    #[test]
    fn unknown_name_rejected() {
        assert_eq!(coin_by_name("X"), Err(WalkError::UnknownCoin("X".into())));
    }

    #[test]
    fn worked_products() {
        assert_eq!(&m(CoinName::P) * &m(CoinName::Q), m(CoinName::R).scale(&inv_sqrt2()));
        assert_eq!(&m(CoinName::Q) * &m(CoinName::Q), -m(CoinName::Q).scale(&inv_sqrt2()));
        assert_eq!(&m(CoinName::J) * &m(CoinName::J), -CoinMatrix::identity());
    }

    #[test]
    fn table_cells_hold() {
        let cells = verify_table();
        assert_eq!(cells.len(), 16);
        assert!(cells.iter().all(|c| c.holds), "{cells:?}");
        let cell = |r, c| cells.iter().find(|x| x.row == r && x.col == c).unwrap().clone();
        let rs = cell(CoinName::R, CoinName::S);
        assert!(rs.negated && rs.entry == CoinName::P);
        let sp = cell(CoinName::S, CoinName::P);
        assert!(!sp.negated && sp.entry == CoinName::S);
        assert_eq!(cell(CoinName::P, CoinName::P).entry, CoinName::P);
    }

    #[test]
    fn hadamard_is_unitary() {
        let h = m(CoinName::H);
        assert_eq!(&h * &h.adjoint(), CoinMatrix::identity());
    }

    #[test]
    fn halves_resolve_identity() {
        let (p, q) = (m(CoinName::P), m(CoinName::Q));
        let id = CoinMatrix::identity();
        assert_eq!(&(&p * &p.adjoint()) + &(&q * &q.adjoint()), id);
        assert_eq!(&(&p.adjoint() * &p) + &(&q.adjoint() * &q), id);
        for z in [&p * &q.adjoint(), &q * &p.adjoint(), &q.adjoint() * &p, &p.adjoint() * &q] {
            assert!(z.is_zero());
        }
    }

    #[test]
    fn mirror_intertwines_halves() {
        let (p, q, j) = (m(CoinName::P), m(CoinName::Q), m(CoinName::J));
        assert_eq!(&q * &j, -(&j * &p));
        assert_eq!(&p * &j, -(&j * &q));
    }
}
