//! Finite positive measures on the line for the norm formulas. The formulas
//! hold for any finite positive measure; these are the ones exercised by the
//! verification paths, plus tabulated custom densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::{gamma, real, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure<T: Real> {
    /// density 1/(b-a) on [a, b]; total mass 1.
    UniformWindow { a: T, b: T },
    /// density 1/2 on [-1, 1]; total mass 1.
    HalfIndicator,
    /// density (1 + v^2)^{-3/4} on the whole line; finite total mass.
    CauchyLike,
    /// tabulated density samples (v, density), piecewise linear.
    Custom { table: Vec<(T, T)> },
}

impl<T: Real> Measure<T> {
    pub fn uniform_window(a: T, b: T) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidParameter(format!(
                "uniform window needs a < b, got [{a}, {b}]"
            )));
        }
        Ok(Measure::UniformWindow { a, b })
    }

    pub fn custom(table: Vec<(T, T)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidParameter(
                "custom measure needs at least two table points".into(),
            ));
        }
        for pair in table.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::InvalidParameter(
                    "custom measure table must be strictly increasing in v".into(),
                ));
            }
        }
        if table.iter().any(|&(_, d)| !(d >= T::zero())) {
            return Err(Error::InvalidParameter(
                "custom measure density must be nonnegative".into(),
            ));
        }
        let m = Measure::Custom { table };
        if !(m.total_mass() > T::zero()) {
            return Err(Error::InvalidParameter(
                "custom measure must have positive mass".into(),
            ));
        }
        Ok(m)
    }

    pub fn total_mass(&self) -> T {
        match self {
            Measure::UniformWindow { .. } | Measure::HalfIndicator => T::one(),
            // closed form sqrt(pi) Gamma(1/4) / Gamma(3/4)
            Measure::CauchyLike => {
                T::PI().sqrt() * gamma(real::<T>(0.25)) / gamma(real::<T>(0.75))
            }
            Measure::Custom { table } => table
                .windows(2)
                .map(|p| (p[1].0 - p[0].0) * (p[0].1 + p[1].1) * real::<T>(0.5))
                .fold(T::zero(), |a, b| a + b),
        }
    }

    /// Quadrature nodes (t_i, w_i) with sum w_i f(t_i) ~ integral of f d mu.
    pub fn quadrature(&self, n: usize) -> Vec<(T, T)> {
        match self {
            Measure::UniformWindow { a, b } => {
                let density = T::one() / (*b - *a);
                gauss_legendre_on(n, *a, *b)
                    .into_iter()
                    .map(|(t, w)| (t, w * density))
                    .collect()
            }
            Measure::HalfIndicator => gauss_legendre_on(n, -T::one(), T::one())
                .into_iter()
                .map(|(t, w)| (t, w * real::<T>(0.5)))
                .collect(),
            // v = sinh(u) turns the density into cosh(u)^{-1/2}, which decays
            // like e^{-|u|/2}; truncating at |u| = 64 leaves ~1e-13 of the
            // mass. Composite panels keep the O(1)-width peak resolved.
            Measure::CauchyLike => {
                let cut = real::<T>(64.0);
                let panels = 64usize;
                let per_panel = (n / panels).max(8);
                let mut out = Vec::with_capacity(panels * per_panel);
                for k in 0..panels {
                    let a = -cut + (cut + cut) * T::from_usize(k).unwrap() / T::from_usize(panels).unwrap();
                    let b = -cut + (cut + cut) * T::from_usize(k + 1).unwrap() / T::from_usize(panels).unwrap();
                    out.extend(
                        gauss_legendre_on(per_panel, a, b)
                            .into_iter()
                            .map(|(u, w)| (u.sinh(), w / u.cosh().sqrt())),
                    );
                }
                out
            }
            Measure::Custom { table } => {
                // trapezoid weights on the tabulated grid
                let mut nodes = vec![(table[0].0, T::zero()); table.len()];
                for (i, pair) in table.windows(2).enumerate() {
                    let h = pair[1].0 - pair[0].0;
                    nodes[i].0 = table[i].0;
                    nodes[i].1 = nodes[i].1 + h * pair[0].1 * real(0.5);
                    nodes[i + 1].0 = table[i + 1].0;
                    nodes[i + 1].1 = nodes[i + 1].1 + h * pair[1].1 * real(0.5);
                }
                nodes
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Measure::UniformWindow { a, b } => format!("uniform[{a},{b}]"),
            Measure::HalfIndicator => "half_indicator".into(),
            Measure::CauchyLike => "cauchy_like".into(),
            Measure::Custom { table } => format!("custom({} pts)", table.len()),
        }
    }
}
