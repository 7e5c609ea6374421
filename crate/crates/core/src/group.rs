//! Littlewood polynomials as elements of the Hadamard group.
//!
//! A degree-`d` Littlewood polynomial `p(z) = a_0 + a_1 z + ... + a_d z^d`
//! with every `a_j` in `{-1, +1}` is stored as a sign mask: bit `j` is set
//! exactly when `a_j = -1`. Under that encoding the coefficient-wise
//! (Hadamard) product is XOR, the identity `e = 1 + z + ... + z^d` is the
//! zero mask, every element is its own inverse, and the number of negative
//! coefficients is a popcount. The group is `(Z/2)^(d+1)` written in bits.
//!
//! The generators are the `d + 1` polynomials with a single negative
//! coefficient. Because they flip disjoint coefficients, every polynomial
//! factors over them in exactly one way: its set bits.
//!
//! Note that the Hadamard product is not the ring product. For
//! `p = -z^2 + z + 1` and `q = -z^2 - z + 1` the Hadamard product is
//! `z^2 - z + 1`, while the ordinary product is `z^4 - 3z^2 + 1`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree; `d + 1` sign bits must fit a `u64`.
pub const MAX_DEGREE: u32 = 62;

fn check_degree(degree: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&degree) {
        Ok(())
    } else {
        Err(Error::InvalidDegree {
            degree,
            min: 1,
            max: MAX_DEGREE,
        })
    }
}

/// Mask with bits `0..=degree` set.
#[inline]
pub fn full_mask(degree: u32) -> u64 {
    debug_assert!(degree <= MAX_DEGREE);
    (1u64 << (degree + 1)) - 1
}

/// Number of polynomials of the given degree, `2^(d+1)`.
#[inline]
pub fn group_order(degree: u32) -> u64 {
    1u64 << (degree + 1)
}

/// A Littlewood polynomial of fixed degree, encoded as a sign mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    degree: u32,
    mask: u64,
}

impl SignVector {
    pub fn new(degree: u32, mask: u64) -> Result<Self> {
        check_degree(degree)?;
        if mask & !full_mask(degree) != 0 {
            return Err(Error::InvalidMask { degree, mask });
        }
        Ok(SignVector { degree, mask })
    }

    /// Unchecked constructor for callers that already validated both fields.
    #[inline]
    pub(crate) fn from_parts(degree: u32, mask: u64) -> Self {
        debug_assert!(check_degree(degree).is_ok());
        debug_assert_eq!(mask & !full_mask(degree), 0);
        SignVector { degree, mask }
    }

    /// Builds a polynomial from its coefficients `a_0, a_1, ..., a_d`.
    /// Every entry must be `1` or `-1`.
    pub fn from_coefficients(coefficients: &[i8]) -> Result<Self> {
        let degree = coefficients.len().saturating_sub(1) as u32;
        check_degree(degree)?;
        let mut mask = 0u64;
        for (j, &a) in coefficients.iter().enumerate() {
            match a {
                1 => {}
                -1 => mask |= 1 << j,
                _ => return Err(Error::InvalidMask { degree, mask: u64::MAX }),
            }
        }
        Ok(SignVector { degree, mask })
    }

    /// The all-ones polynomial `e(z) = 1 + z + ... + z^d`.
    pub fn identity(degree: u32) -> Result<Self> {
        check_degree(degree)?;
        Ok(SignVector { degree, mask: 0 })
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    /// Coefficient `a_j` as `+1` or `-1`.
    #[inline]
    pub fn coefficient(self, j: u32) -> i8 {
        debug_assert!(j <= self.degree);
        if self.mask >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Coefficients `a_0..=a_d`, constant term first.
    pub fn coefficients(self) -> Vec<i8> {
        (0..=self.degree).map(|j| self.coefficient(j)).collect()
    }

    pub fn is_identity(self) -> bool {
        self.mask == 0
    }

    /// Hadamard (coefficient-wise) product.
    pub fn hadamard(self, other: SignVector) -> Result<SignVector> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(SignVector {
            degree: self.degree,
            mask: self.mask ^ other.mask,
        })
    }

    /// Group inverse. Every element is an involution, so this is `self`.
    pub fn inverse(self) -> SignVector {
        self
    }

    /// Number of negative coefficients, in `0..=d+1`.
    pub fn nu(self) -> u32 {
        self.mask.count_ones()
    }

    /// The unique set of generators whose Hadamard product is `self`,
    /// in ascending position order. Its length is [`nu`](Self::nu).
    pub fn sigma(self) -> Vec<GeneratorIndex> {
        SetBits(self.mask)
            .map(|position| GeneratorIndex {
                degree: self.degree,
                position,
            })
            .collect()
    }

    /// `-p`: every coefficient flipped.
    pub fn negate(self) -> SignVector {
        SignVector {
            degree: self.degree,
            mask: !self.mask & full_mask(self.degree),
        }
    }

    /// The reciprocal polynomial `z^d p(1/z)`, i.e. the coefficient vector
    /// reversed. Its roots are the inverses of the roots of `p`.
    pub fn reciprocal(self) -> SignVector {
        let shift = 63 - self.degree;
        SignVector {
            degree: self.degree,
            mask: self.mask.reverse_bits() >> shift,
        }
    }

    /// Representative of `{p, -p}` with leading coefficient `+1`.
    pub fn monic(self) -> SignVector {
        if self.mask >> self.degree & 1 == 1 {
            self.negate()
        } else {
            self
        }
    }
}

impl fmt::Display for SignVector {
    /// Prints the polynomial highest power first, e.g. `z^3 - z^2 - z + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..=self.degree).rev() {
            let negative = self.coefficient(j) < 0;
            let sign = match (j == self.degree, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sign)?;
            match j {
                0 => f.write_str("1")?,
                1 => f.write_str("z")?,
                _ => write!(f, "z^{j}")?,
            }
        }
        Ok(())
    }
}

/// Generator with a single negative coefficient at `position`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorIndex {
    degree: u32,
    position: u32,
}

impl GeneratorIndex {
    pub fn new(degree: u32, position: u32) -> Result<Self> {
        check_degree(degree)?;
        if position > degree {
            return Err(Error::PositionOutOfRange { degree, position });
        }
        Ok(GeneratorIndex { degree, position })
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn position(self) -> u32 {
        self.position
    }

    pub fn to_sign_vector(self) -> SignVector {
        SignVector::from_parts(self.degree, 1 << self.position)
    }
}

impl From<GeneratorIndex> for SignVector {
    fn from(g: GeneratorIndex) -> Self {
        g.to_sign_vector()
    }
}

/// The generating set: `d + 1` polynomials, the `j`-th negative only at `z^j`.
pub fn generators(degree: u32) -> Result<Vec<SignVector>> {
    check_degree(degree)?;
    Ok((0..=degree).map(|j| SignVector::from_parts(degree, 1 << j)).collect())
}

/// Hadamard product of a sequence of same-degree polynomials.
/// An empty sequence yields the identity of `degree`.
pub fn hadamard_product<I>(degree: u32, factors: I) -> Result<SignVector>
where
    I: IntoIterator<Item = SignVector>,
{
    factors
        .into_iter()
        .try_fold(SignVector::identity(degree)?, |acc, f| acc.hadamard(f))
}

/// Iterator over the set bit positions of a word, ascending.
struct SetBits(u64);

impl Iterator for SetBits {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(bit)
    }
}

/// All polynomials of a degree whose mask lies in `[lo, hi)`, ascending.
pub fn enumerate(degree: u32, lo: u64, hi: u64) -> Result<MaskRange> {
    check_degree(degree)?;
    let limit = group_order(degree);
    if lo > hi || hi > limit {
        return Err(Error::RangeOutOfBounds { lo, hi, limit });
    }
    Ok(MaskRange {
        degree,
        next: lo,
        end: hi,
    })
}

#[derive(Clone, Debug)]
pub struct MaskRange {
    degree: u32,
    next: u64,
    end: u64,
}

impl Iterator for MaskRange {
    type Item = SignVector;

    fn next(&mut self) -> Option<SignVector> {
        if self.next >= self.end {
            return None;
        }
        let p = SignVector::from_parts(self.degree, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.end.saturating_sub(self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MaskRange {}

/// Names the class `N_d(n)` of polynomials with exactly `n` negative
/// coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NuClassDescriptor {
    degree: u32,
    n: u32,
}

impl NuClassDescriptor {
    pub fn new(degree: u32, n: u32) -> Result<Self> {
        check_degree(degree)?;
        if n > degree + 1 {
            return Err(Error::ClassOutOfRange { degree, n });
        }
        Ok(NuClassDescriptor { degree, n })
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// `C(d + 1, n)`.
    pub fn cardinality(self) -> u64 {
        binomial(self.degree as u64 + 1, self.n as u64) as u64
    }

    /// The class holding the negations of this one, `N_d(d + 1 - n)`.
    pub fn reflected(self) -> NuClassDescriptor {
        NuClassDescriptor {
            degree: self.degree,
            n: self.degree + 1 - self.n,
        }
    }
}

/// Every member of a class, ascending by mask.
pub fn enumerate_nu_class(class: NuClassDescriptor) -> NuClassIter {
    NuClassIter::starting_at(class, 0)
}

/// Members of a class whose mask lies in `[lo, hi)`, ascending by mask.
pub fn enumerate_nu_class_in(class: NuClassDescriptor, lo: u64, hi: u64) -> Result<NuClassIter> {
    let limit = group_order(class.degree);
    if lo > hi || hi > limit {
        return Err(Error::RangeOutOfBounds { lo, hi, limit });
    }
    let mut it = NuClassIter::starting_at(class, lo);
    it.end = hi;
    Ok(it)
}

/// Fixed-popcount masks in ascending order (Gosper's successor).
#[derive(Clone, Debug)]
pub struct NuClassIter {
    degree: u32,
    next: Option<u64>,
    end: u64,
}

impl NuClassIter {
    fn starting_at(class: NuClassDescriptor, lo: u64) -> Self {
        let end = group_order(class.degree);
        NuClassIter {
            degree: class.degree,
            next: first_with_popcount(lo, class.n, class.degree + 1),
            end,
        }
    }
}

impl Iterator for NuClassIter {
    type Item = SignVector;

    fn next(&mut self) -> Option<SignVector> {
        let x = self.next.filter(|&x| x < self.end)?;
        self.next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            Some((((r ^ x) >> 2) / c) | r)
        };
        Some(SignVector::from_parts(self.degree, x))
    }
}

/// Smallest `x >= lo` with `x < 2^bits` and exactly `k` set bits.
fn first_with_popcount(lo: u64, k: u32, bits: u32) -> Option<u64> {
    let limit = 1u64 << bits;
    if k > bits || lo >= limit {
        return None;
    }
    if lo.count_ones() == k {
        return Some(lo);
    }
    // Raise the lowest feasible zero bit of `lo`, clear everything below it
    // and refill the low end with the ones still needed.
    for i in 0..bits {
        if lo >> i & 1 == 1 {
            continue;
        }
        let prefix = (lo >> (i + 1) << (i + 1)) | (1 << i);
        let have = prefix.count_ones();
        if have <= k && k - have <= i {
            let candidate = prefix | ((1u64 << (k - have)) - 1);
            return (candidate < limit).then_some(candidate);
        }
    }
    None
}

/// Binomial coefficient in 128-bit arithmetic; exact for `n <= 63`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(coeffs: &[i8]) -> SignVector {
        SignVector::from_coefficients(coeffs).unwrap()
    }

    #[test]
    fn identity_has_no_negative_coefficients() {
        let e = SignVector::identity(3).unwrap();
        assert_eq!(e.mask(), 0b0000);
        for d in 1..=MAX_DEGREE {
            assert_eq!(SignVector::identity(d).unwrap().nu(), 0);
        }
        assert!(SignVector::identity(0).is_err());
        assert!(SignVector::identity(63).is_err());
    }

    #[test]
    fn hadamard_worked_example() {
        // (-z^2 + z + 1) o (-z^2 - z + 1) = z^2 - z + 1
        let p = sv(&[1, 1, -1]);
        let q = sv(&[1, -1, -1]);
        let r = p.hadamard(q).unwrap();
        assert_eq!(r, sv(&[1, -1, 1]));
        assert_eq!(r.to_string(), "z^2 - z + 1");
    }

    #[test]
    fn hadamard_rejects_degree_mismatch() {
        let p = SignVector::identity(2).unwrap();
        let q = SignVector::identity(3).unwrap();
        assert!(matches!(
            p.hadamard(q),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn nu_and_sigma_worked_example() {
        // z^3 - z^2 - z + 1
        let p = sv(&[1, -1, -1, 1]);
        assert_eq!(p.nu(), 2);
        let factors: Vec<SignVector> = p.sigma().into_iter().map(Into::into).collect();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].to_string(), "z^3 + z^2 - z + 1");
        assert_eq!(factors[1].to_string(), "z^3 - z^2 + z + 1");
        assert_eq!(hadamard_product(3, factors).unwrap(), p);
        assert_eq!(p.negate().nu(), 2);
    }

    #[test]
    fn sigma_edge_cases() {
        let e = SignVector::identity(5).unwrap();
        assert!(e.sigma().is_empty());
        for g in generators(5).unwrap() {
            let s = g.sigma();
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].to_sign_vector(), g);
        }
    }

    #[test]
    fn generators_are_single_bits() {
        let masks: Vec<u64> = generators(3).unwrap().iter().map(|g| g.mask()).collect();
        assert_eq!(masks, vec![0b0001, 0b0010, 0b0100, 0b1000]);
        for d in 1..=20 {
            let gs = generators(d).unwrap();
            assert_eq!(gs.len() as u32, d + 1);
            let all = gs.iter().fold(0u64, |acc, g| acc ^ g.mask());
            assert_eq!(all, full_mask(d));
        }
        assert!(generators(0).is_err());
    }

    #[test]
    fn negate_and_reciprocal() {
        let e = SignVector::identity(3).unwrap();
        assert_eq!(e.negate().mask(), 0b1111);
        assert_eq!(e.negate().nu(), 4);
        let p = sv(&[-1, 1, 1, 1, 1]);
        assert_eq!(p.reciprocal(), sv(&[1, 1, 1, 1, -1]));
        assert_eq!(p.monic(), p);
        assert_eq!(p.reciprocal().monic(), p.reciprocal().negate());
    }

    #[test]
    fn enumerate_ranges() {
        assert_eq!(enumerate(3, 0, 16).unwrap().count(), 16);
        assert_eq!(enumerate(5, 0, 0).unwrap().count(), 0);
        let joined: Vec<_> = enumerate(3, 0, 8)
            .unwrap()
            .chain(enumerate(3, 8, 16).unwrap())
            .collect();
        let whole: Vec<_> = enumerate(3, 0, 16).unwrap().collect();
        assert_eq!(joined, whole);
        assert!(enumerate(3, 0, 17).is_err());
        assert!(enumerate(3, 5, 4).is_err());
    }

    #[test]
    fn nu_class_counts_match_popcount_filter() {
        let brute = |d: u32, n: u32| (0..group_order(d)).filter(|m| m.count_ones() == n).count();
        let c = NuClassDescriptor::new(14, 7).unwrap();
        assert_eq!(enumerate_nu_class(c).count(), brute(14, 7));
        assert_eq!(brute(14, 7), 6435);
        assert_eq!(enumerate_nu_class(NuClassDescriptor::new(3, 2).unwrap()).count(), 6);
        let zero: Vec<_> = enumerate_nu_class(NuClassDescriptor::new(9, 0).unwrap()).collect();
        assert_eq!(zero, vec![SignVector::identity(9).unwrap()]);
        let top: Vec<_> = enumerate_nu_class(NuClassDescriptor::new(9, 10).unwrap()).collect();
        assert_eq!(top, vec![SignVector::identity(9).unwrap().negate()]);
        assert!(NuClassDescriptor::new(3, 5).is_err());
    }

    #[test]
    fn nu_class_at_max_degree_terminates() {
        let c = NuClassDescriptor::new(MAX_DEGREE, MAX_DEGREE).unwrap();
        assert_eq!(enumerate_nu_class(c).count(), 63);
    }

    #[test]
    fn nu_class_subrange_matches_filter() {
        for d in 1..=7 {
            for n in 0..=d + 1 {
                let c = NuClassDescriptor::new(d, n).unwrap();
                let all: Vec<u64> = enumerate_nu_class(c).map(|p| p.mask()).collect();
                for lo in 0..group_order(d) {
                    for hi in [lo, lo + 1, (lo + 7).min(group_order(d)), group_order(d)] {
                        let got: Vec<u64> = enumerate_nu_class_in(c, lo, hi).unwrap().map(|p| p.mask()).collect();
                        let want: Vec<u64> = all.iter().copied().filter(|&m| m >= lo && m < hi).collect();
                        assert_eq!(got, want, "d={d} n={n} [{lo},{hi})");
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(15, 7), 6435);
        assert_eq!(binomial(14, 7), 3432);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(63, 31), 916312070471295267);
    }
}
