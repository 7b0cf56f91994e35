use std::fmt::Debug;

use num_traits::{One, Zero};

use super::scalar::Rat;

/// Coefficient ring used by the series, Fock and operator containers.
///
/// Implementations must be exact. `exp_nilpotent` returns `exp(self)` only
/// when it is again an element of the ring (e.g. the zero scalar, or a
/// truncated polynomial without constant term).
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    fn from_rat(c: Rat) -> Self;
    fn try_inv(&self) -> Option<Self>;
    fn exp_nilpotent(&self) -> Option<Self>;

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn from_rat(c: Rat) -> Self {
        c
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn exp_nilpotent(&self) -> Option<Self> {
        Zero::is_zero(self).then(One::one)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}
