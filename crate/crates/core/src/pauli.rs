//! Pauli strings, the operator families `S_i` (letters I/Z) and `R_i`
//! (letters X/Y), the even-Z commutant `C`, and the channel that keeps only
//! the X-part of a density matrix.
//!
//! Bit order: the most significant bit of an index (and of a basis label)
//! belongs to the leftmost tensor factor.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::linalg::ComplexMatrix;
use crate::states::{DensityMatrix, MAX_DENSE_QUBITS};
use crate::{Error, Result};

/// Largest N for which [`commutation_census_dense`] builds matrices.
pub const MAX_DENSE_CENSUS_QUBITS: usize = 5;

/// Upper limit on string length for index-based constructors.
pub const MAX_INDEXED_QUBITS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product `self * other` as `(i^k, letter)`.
    fn mul(self, other: Self) -> (u8, Self) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
        }
    }

    /// Flips the basis bit.
    fn is_offdiagonal(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// `<row| P |row ^ flip>` for this single-qubit operator.
    fn entry(self, row_bit: bool) -> C64 {
        match (self, row_bit) {
            (Pauli::I, _) | (Pauli::X, _) | (Pauli::Z, false) => C64::new(1.0, 0.0),
            (Pauli::Z, true) => C64::new(-1.0, 0.0),
            (Pauli::Y, false) => C64::new(0.0, -1.0),
            (Pauli::Y, true) => C64::new(0.0, 1.0),
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Global phase `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    fn from_power(k: u8) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    fn power(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> C64 {
        match self {
            Phase::PlusOne => C64::new(1.0, 0.0),
            Phase::PlusI => C64::new(0.0, 1.0),
            Phase::MinusOne => C64::new(-1.0, 0.0),
            Phase::MinusI => C64::new(0.0, -1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, phase: Phase) -> Self {
        Self { letters, phase }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![Pauli::I; n_qubits], Phase::PlusOne)
    }

    /// Parses a word such as `"XZI"` (phase +1).
    pub fn parse(word: &str) -> Result<Self> {
        let letters = word
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<_>>()?;
        Ok(Self::new(letters, Phase::PlusOne))
    }

    fn from_bits(index: u64, n_qubits: usize, zero: Pauli, one: Pauli) -> Result<Self> {
        if n_qubits > MAX_INDEXED_QUBITS || index >> n_qubits != 0 {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        let letters = (0..n_qubits)
            .map(|j| if index >> (n_qubits - 1 - j) & 1 == 1 { one } else { zero })
            .collect();
        Ok(Self::new(letters, Phase::PlusOne))
    }

    /// `S_i`: binary digits of `i`, 0 -> I, 1 -> Z.
    pub fn s_operator(index: u64, n_qubits: usize) -> Result<Self> {
        Self::from_bits(index, n_qubits, Pauli::I, Pauli::Z)
    }

    /// `R_i`: binary digits of `i`, 0 -> X, 1 -> Y.
    pub fn r_operator(index: u64, n_qubits: usize) -> Result<Self> {
        Self::from_bits(index, n_qubits, Pauli::X, Pauli::Y)
    }

    /// The `index`-th of all `4^N` phase-free strings (base-4 digits
    /// I, X, Y, Z, most significant digit leftmost).
    pub fn from_index(index: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_INDEXED_QUBITS / 2 || index >> (2 * n_qubits) != 0 {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        let letters = (0..n_qubits)
            .map(|j| match index >> (2 * (n_qubits - 1 - j)) & 3 {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        Ok(Self::new(letters, Phase::PlusOne))
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Letters drawn from {I, Z} only.
    pub fn in_s(&self) -> bool {
        self.letters.iter().all(|p| !p.is_offdiagonal())
    }

    /// Letters drawn from {X, Y} only.
    pub fn in_r(&self) -> bool {
        self.letters.iter().all(|p| p.is_offdiagonal())
    }

    pub fn in_s_or_r(&self) -> bool {
        self.in_s() || self.in_r()
    }

    pub fn count(&self, letter: Pauli) -> usize {
        self.letters.iter().filter(|&&p| p == letter).count()
    }

    /// Hermitian for phase +-1, anti-Hermitian for +-i.
    pub fn is_hermitian(&self) -> bool {
        matches!(self.phase, Phase::PlusOne | Phase::MinusOne)
    }

    /// Two strings commute iff they differ on an even number of positions
    /// where both are non-identity.
    pub fn commutes_with(&self, other: &Self) -> bool {
        assert_eq!(self.n_qubits(), other.n_qubits(), "string lengths differ");
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    fn flip_mask(&self) -> usize {
        let n = self.n_qubits();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_offdiagonal())
            .fold(0, |m, (j, _)| m | 1 << (n - 1 - j))
    }

    /// The single nonzero entry of row `row`, at column `row ^ flip_mask`.
    fn row_value(&self, row: usize) -> C64 {
        let n = self.n_qubits();
        let mut v = self.phase.to_complex();
        for (j, p) in self.letters.iter().enumerate() {
            v *= p.entry(row >> (n - 1 - j) & 1 == 1);
        }
        v
    }

    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        let n = self.n_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::QubitCount { n_qubits: n, reason: "beyond the dense range (at most 10)" });
        }
        let dim = 1usize << n;
        let flip = self.flip_mask();
        let mut m = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            m[(r, r ^ flip)] = self.row_value(r);
        }
        Ok(m)
    }

    /// `P rho P^H` in O(4^N), using that P is a phased permutation.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n_qubits();
        if rho.dim() != 1usize << n {
            return Err(Error::DimensionMismatch { left: 1usize << n, right: rho.dim() });
        }
        let flip = self.flip_mask();
        let values: Vec<C64> = (0..rho.dim()).map(|r| self.row_value(r)).collect();
        Ok(ComplexMatrix::from_fn(rho.dim(), |r, s| {
            values[r] * rho[(r ^ flip, s ^ flip)] * values[s].conj()
        }))
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.n_qubits(), rhs.n_qubits(), "string lengths differ");
        let mut power = self.phase.power() + rhs.phase.power();
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(a, b)| {
                let (k, p) = a.mul(*b);
                power += k;
                p
            })
            .collect();
        PauliString::new(letters, Phase::from_power(power))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            Phase::PlusOne => "+",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        };
        write!(f, "{sign}")?;
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// The `2^(N-1)` members of `S` with an even number of Z letters. They commute
/// with every element of `S ∪ R`.
#[derive(Clone, Debug)]
pub struct CommutantSet {
    n_qubits: usize,
    members: Vec<PauliString>,
}

impl CommutantSet {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn members(&self) -> &[PauliString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn build_commutant(n_qubits: usize) -> Result<CommutantSet> {
    if n_qubits == 0 || n_qubits > 24 {
        return Err(Error::QubitCount { n_qubits, reason: "commutant is built for 1..=24 qubits" });
    }
    let members = (0..1u64 << n_qubits)
        .filter(|i| i.count_ones() % 2 == 0)
        .map(|i| PauliString::s_operator(i, n_qubits))
        .collect::<Result<_>>()?;
    Ok(CommutantSet { n_qubits, members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Census {
    pub commuting: usize,
    pub anticommuting: usize,
}

fn check_census_sizes(a: &PauliString, c: &CommutantSet) -> Result<()> {
    if a.n_qubits() != c.n_qubits {
        return Err(Error::DimensionMismatch { left: a.n_qubits(), right: c.n_qubits });
    }
    Ok(())
}

/// Counts members of `C` commuting and anticommuting with `a`, by the
/// letter-counting rule. For `a` in `S ∪ R` every member commutes; for any
/// other string the split is `(2^(N-2), 2^(N-2))`.
pub fn commutation_census(a: &PauliString, c: &CommutantSet) -> Result<Census> {
    check_census_sizes(a, c)?;
    let commuting = c.members.iter().filter(|b| a.commutes_with(b)).count();
    Ok(Census { commuting, anticommuting: c.len() - commuting })
}

/// Same counts from explicit matrices: `AB - BA = 0` or `AB + BA = 0`.
pub fn commutation_census_dense(a: &PauliString, c: &CommutantSet) -> Result<Census> {
    check_census_sizes(a, c)?;
    if c.n_qubits > MAX_DENSE_CENSUS_QUBITS {
        return Err(Error::QubitCount { n_qubits: c.n_qubits, reason: "dense census is limited to 5 qubits" });
    }
    let am = a.to_dense()?;
    let mut census = Census { commuting: 0, anticommuting: 0 };
    for b in &c.members {
        let bm = b.to_dense()?;
        let ab = &am * &bm;
        let ba = &bm * &am;
        if ab.max_abs_diff(&ba) == 0.0 {
            census.commuting += 1;
        } else if ab.max_abs_diff(&ba.scale(-1.0)) == 0.0 {
            census.anticommuting += 1;
        } else {
            return Err(Error::InvalidArgument(format!("{a} and {b} neither commute nor anticommute")));
        }
    }
    Ok(census)
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `sum_{i,j} C(m, 2i) C(n - m, 2j)`: the number of even-Z members of `C`
/// whose Z count on a fixed `m`-site support is also even. Equals `2^(n-2)`
/// for `1 <= m <= n - 1`.
pub fn even_split_count(n: u32, m: u32) -> u128 {
    assert!(m <= n, "support larger than the string");
    let even = |size: u32| (0..=size / 2).map(|i| binomial(size, 2 * i)).sum::<u128>();
    even(m) * even(n - m)
}

/// The X-part channel as a Kraus mixture: `2^-(N-1) sum_{S in C} S rho S`.
pub fn chi_kraus(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let c = build_commutant(rho.n_qubits())?;
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for s in c.members() {
        acc = &acc + &s.conjugate(rho.matrix())?;
    }
    Ok(DensityMatrix::from_trusted(acc.scale(1.0 / c.len() as f64)))
}

/// Kraus operators of [`chi_kraus`], each scaled by `2^-(N-1)/2`.
pub fn chi_kraus_operators(n_qubits: usize) -> Result<Vec<ComplexMatrix>> {
    let c = build_commutant(n_qubits)?;
    let scale = (1.0 / c.len() as f64).sqrt();
    c.members().iter().map(|s| Ok(s.to_dense()?.scale(scale))).collect()
}

/// The X-part by direct entry zeroing: everything off the diagonal and the
/// anti-diagonal is set to zero.
pub fn chi_zero(rho: &DensityMatrix) -> DensityMatrix {
    let dim = rho.dim();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(dim, |r, c| {
        if c == r || c == dim - 1 - r {
            m[(r, c)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DensityMatrix::from_trusted(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        let x = PauliString::parse("X").unwrap();
        let y = PauliString::parse("Y").unwrap();
        let xy = &x * &y;
        assert_eq!(xy.letters(), &[Pauli::Z]);
        assert_eq!(xy.phase(), Phase::PlusI);
        let yx = &y * &x;
        assert_eq!(yx.phase(), Phase::MinusI);
        // dense check of XY = iZ
        let lhs = &x.to_dense().unwrap() * &y.to_dense().unwrap();
        assert_eq!(lhs, xy.to_dense().unwrap());
    }

    #[test]
    fn s_and_r_examples() {
        assert_eq!(PauliString::s_operator(0, 4).unwrap(), PauliString::identity(4));
        assert_eq!(PauliString::s_operator(2, 5).unwrap().to_string(), "+IIIZI");
        assert_eq!(PauliString::r_operator(3, 5).unwrap().to_string(), "+XXXYY");
        assert!(PauliString::s_operator(8, 3).is_err());
    }

    #[test]
    fn small_commutants() {
        let c1 = build_commutant(1).unwrap();
        assert_eq!(c1.members(), &[PauliString::identity(1)]);
        let names = |n| -> Vec<String> {
            build_commutant(n).unwrap().members().iter().map(|s| s.to_string()).collect()
        };
        assert_eq!(names(2), vec!["+II", "+ZZ"]);
        assert_eq!(names(3), vec!["+III", "+IZZ", "+ZIZ", "+ZZI"]);
    }

    #[test]
    fn census_examples() {
        let c = build_commutant(2).unwrap();
        let zi = PauliString::parse("ZI").unwrap();
        assert_eq!(commutation_census(&zi, &c).unwrap(), Census { commuting: 2, anticommuting: 0 });
        let xz = PauliString::parse("XZ").unwrap();
        assert_eq!(commutation_census(&xz, &c).unwrap(), Census { commuting: 1, anticommuting: 1 });
        assert_eq!(commutation_census_dense(&xz, &c).unwrap(), Census { commuting: 1, anticommuting: 1 });
    }

    #[test]
    fn binomial_identity_small() {
        assert_eq!(even_split_count(4, 1), 4);
        assert_eq!(even_split_count(4, 2), 4);
        // the identity does not hold at the S∪R ends
        assert_eq!(even_split_count(4, 0), 8);
        assert_eq!(even_split_count(4, 4), 8);
    }

    #[test]
    fn conjugate_matches_dense_product() {
        let p = PauliString::parse("XYZ").unwrap();
        let rho = ComplexMatrix::from_fn(8, |i, j| C64::new((i * 8 + j) as f64, (i as f64) - (j as f64)));
        let dense = p.to_dense().unwrap();
        let expected = &(&dense * &rho) * &dense.adjoint();
        assert!(p.conjugate(&rho).unwrap().max_abs_diff(&expected) < 1e-12);
    }
}
