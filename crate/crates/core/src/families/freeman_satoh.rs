//! The curves `y^2 = x^5 + a x^3 + b x` and `y^2 = x^6 + a x^3 + b`, whose
//! Jacobians split as `E(c)^2` over an extension, `c = a / sqrt(b)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{Field, Rationals};
use crate::error::{Error, Result};
use crate::families::elliptic::Cubic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsForm {
    Deg5,
    Deg6,
}

impl FsForm {
    /// Order of the root of unity in the field of definition of the splitting.
    pub fn m(self) -> u32 {
        match self {
            FsForm::Deg5 => 4,
            FsForm::Deg6 => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreemanSatohCurve {
    pub form: FsForm,
    #[serde(with = "crate::io::rational")]
    pub a: BigRational,
    #[serde(with = "crate::io::rational")]
    pub b: BigRational,
    #[serde(with = "crate::io::rational")]
    pub c: BigRational,
    pub m: u32,
    pub e: Cubic,
    /// Integral monic model `x^3 + a2 x^2 + a4 x + a6` of `E(c)`, as `a6..1`.
    #[serde(with = "crate::io::decimal_vec")]
    pub normalized: Vec<BigInt>,
}

impl FreemanSatohCurve {
    /// `x^0..x^6` of the genus-2 curve.
    pub fn curve_coeffs(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); 7];
        match self.form {
            FsForm::Deg5 => {
                out[5] = Rationals.one();
                out[3] = self.a.clone();
                out[1] = self.b.clone();
            }
            FsForm::Deg6 => {
                out[6] = Rationals.one();
                out[3] = self.a.clone();
                out[0] = self.b.clone();
            }
        }
        out
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `E(c)` for rational `c`.
pub fn e_of_c(form: FsForm, c: &BigRational) -> Result<Cubic> {
    let coeffs = match form {
        FsForm::Deg5 => [-(c + q(2)), q(3) * c - q(10), -(q(3) * c - q(10)), c + q(2)],
        FsForm::Deg6 => [-(c - q(2)), q(3) * c + q(30), -(q(3) * c - q(30)), c + q(2)],
    };
    let e = Cubic::new(coeffs)?;
    if !e.is_nonsingular() {
        return Err(Error::InvalidModel(format!("E({c}) is singular")));
    }
    Ok(e)
}

pub fn freeman_satoh_e(form: FsForm, a: &BigRational, b: &BigRational) -> Result<FreemanSatohCurve> {
    if b.is_zero() {
        return Err(Error::Zero);
    }
    let root = Rationals
        .sqrt(b)
        .ok_or_else(|| Error::ExtensionOnly(format!("b = {b} is not a rational square, so c is irrational")))?;
    let c = a / root;
    let e = e_of_c(form, &c)?;
    let normalized = e.integral_monic().to_vec();
    Ok(FreemanSatohCurve { form, a: a.clone(), b: b.clone(), c, m: form.m(), e, normalized })
}
