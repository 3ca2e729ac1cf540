//! Second homology of the target with its Chern and symplectic pairings.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("class has rank {found}, basis has rank {expected}")]
    InvalidClass { expected: usize, found: usize },
    #[error("invalid target geometry: {0}")]
    InvalidGeometry(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HomologyClass {
    pub coeffs: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        HomologyClass { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        HomologyClass {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        HomologyClass {
            coeffs: vec![BigInt::zero(); rank],
        }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coeffs[i] = BigInt::from(1);
        c
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        HomologyClass {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_u64(&self, k: u64) -> Self {
        self.scale(&BigInt::from(k))
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in class addition");
        HomologyClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self + &(-rhs)
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        HomologyClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetGeometry {
    pub r: i64,
    pub basis_labels: Vec<String>,
    pub c1: Vec<BigInt>,
    pub omega: Vec<BigRational>,
    pub positivity_generators: Vec<HomologyClass>,
}

impl TargetGeometry {
    pub fn new(
        r: i64,
        basis_labels: Vec<String>,
        c1: Vec<BigInt>,
        omega: Vec<BigRational>,
        positivity_generators: Vec<HomologyClass>,
    ) -> Result<Self, GeomError> {
        let ctx = TargetGeometry {
            r,
            basis_labels,
            c1,
            omega,
            positivity_generators,
        };
        ctx.check()?;
        Ok(ctx)
    }

    /// Rank-`rank` context with every basis pairing equal to `c1` and `omega = 1`.
    pub fn uniform(r: i64, rank: usize, c1: i64) -> Self {
        let labels = (0..rank).map(|i| format!("e{}", i + 1)).collect();
        let gens = (0..rank).map(|i| HomologyClass::basis(rank, i)).collect();
        TargetGeometry::new(
            r,
            labels,
            vec![BigInt::from(c1); rank],
            vec![BigRational::from_integer(BigInt::from(1)); rank],
            gens,
        )
        .expect("uniform context is valid")
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn check(&self) -> Result<(), GeomError> {
        if self.r < 3 {
            return Err(GeomError::InvalidGeometry(format!(
                "complex dimension r = {} is below 3",
                self.r
            )));
        }
        if self.c1.len() != self.rank() || self.omega.len() != self.rank() {
            return Err(GeomError::InvalidGeometry(format!(
                "pairing lengths c1 = {}, omega = {} do not match basis rank {}",
                self.c1.len(),
                self.omega.len(),
                self.rank()
            )));
        }
        for g in &self.positivity_generators {
            let w = self.omega_pairing(g)?;
            let c = self.c1_pairing(g)?;
            if w.is_positive() && !c.is_positive() {
                return Err(GeomError::InvalidGeometry(format!(
                    "positivity generator {g} has omega > 0 but c1 = {c}"
                )));
            }
        }
        Ok(())
    }

    fn check_class(&self, a: &HomologyClass) -> Result<(), GeomError> {
        if a.rank() != self.rank() {
            return Err(GeomError::InvalidClass {
                expected: self.rank(),
                found: a.rank(),
            });
        }
        Ok(())
    }

    pub fn c1_pairing(&self, a: &HomologyClass) -> Result<BigInt, GeomError> {
        self.check_class(a)?;
        Ok(self.c1.iter().zip(&a.coeffs).map(|(c, x)| c * x).sum())
    }

    pub fn omega_pairing(&self, a: &HomologyClass) -> Result<BigRational, GeomError> {
        self.check_class(a)?;
        Ok(self
            .omega
            .iter()
            .zip(&a.coeffs)
            .map(|(w, x)| w * BigRational::from_integer(x.clone()))
            .sum())
    }

    pub fn is_positive_class(&self, a: &HomologyClass) -> Result<bool, GeomError> {
        Ok(self.omega_pairing(a)?.is_positive() && self.c1_pairing(a)?.is_positive())
    }
}
