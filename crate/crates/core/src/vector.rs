use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Deref, Mul, Neg, Sub};

macro_rules! coordinate_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
        #[serde(from = "Vec<f64>", into = "Vec<f64>")]
        pub struct $name(pub DVector<f64>);

        impl $name {
            pub fn new(coords: Vec<f64>) -> Self {
                Self(DVector::from_vec(coords))
            }

            pub fn zeros(dim: usize) -> Self {
                Self(DVector::zeros(dim))
            }

            /// The `i`-th basis element (0-based).
            pub fn basis(dim: usize, i: usize) -> Self {
                let mut v = DVector::zeros(dim);
                v[i] = 1.0;
                Self(v)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn to_vec(&self) -> Vec<f64> {
                self.0.iter().copied().collect()
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|x| x.is_finite())
            }

            /// Same direction, unit Euclidean norm. Zero stays zero.
            pub fn normalized(&self) -> Self {
                let n = self.0.norm();
                if n == 0.0 {
                    self.clone()
                } else {
                    Self(&self.0 / n)
                }
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self::new(v)
            }
        }

        impl From<$name> for Vec<f64> {
            fn from(v: $name) -> Self {
                v.to_vec()
            }
        }

        impl From<DVector<f64>> for $name {
            fn from(v: DVector<f64>) -> Self {
                Self(v)
            }
        }

        impl Deref for $name {
            type Target = DVector<f64>;
            fn deref(&self) -> &DVector<f64> {
                &self.0
            }
        }

        impl Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name(&self.0 + &rhs.0)
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl AddAssign<&$name> for $name {
            fn add_assign(&mut self, rhs: &$name) {
                self.0 += &rhs.0;
            }
        }

        impl Sub<&$name> for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name(&self.0 - &rhs.0)
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl Mul<f64> for &$name {
            type Output = $name;
            fn mul(self, rhs: f64) -> $name {
                $name(&self.0 * rhs)
            }
        }

        impl Mul<f64> for $name {
            type Output = $name;
            fn mul(self, rhs: f64) -> $name {
                $name(self.0 * rhs)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(-self.0)
            }
        }
    };
}

coordinate_type!(
    /// Element `u` of the Lie algebra in the chosen basis `e_1, …, e_n`.
    AlgebraVector
);

coordinate_type!(
    /// Element `h` of the dual space, with coordinates `h_i = ⟨h, e_i⟩`.
    AlgebraCovector
);

impl AlgebraCovector {
    /// The canonical pairing `⟨h, u⟩`.
    pub fn pair(&self, u: &AlgebraVector) -> f64 {
        self.0.dot(&u.0)
    }
}

impl AlgebraVector {
    /// Lexicographic comparison of coordinates.
    pub(crate) fn lex_cmp(&self, other: &AlgebraVector) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.partial_cmp(b) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}
