//! Symbols phi(s) = c0 s + psi(s) with c0 a nonnegative integer and psi a
//! Dirichlet polynomial, plus finite-horizon certification of the class
//! conditions: Re psi >= 1/2 on the boundary for characteristic zero,
//! Re psi >= 0 (or psi an imaginary constant) for positive characteristic.
//!
//! Certification samples Re psi(it) on a uniform grid and closes the gaps
//! between samples with the derivative bound sum |a_n| log n. Symbols whose
//! boundary minimum sits exactly on the class threshold (every corpus symbol
//! with a nonconstant psi does) certify with a zero margin and are flagged
//! as marginal; `Inconclusive` is reserved for grids too coarse for the gap
//! bound to say anything.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::character::Character;
use crate::error::{Error, Result};
use crate::scalar::{real, Real, C};
use crate::series::DirichletPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    /// Characteristic 0: psi maps the right half-plane into Re > 1/2.
    G0,
    /// Characteristic >= 1: Re psi >= 0, or psi an imaginary constant.
    Gge1,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::G0 => write!(f, "G0"),
            ClassTag::Gge1 => write!(f, "G>=1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Failed => "failed",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of the boundary sampling run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificationReport<T: Real> {
    pub verdict: Verdict,
    /// Minimum of Re psi over the sampled boundary grid.
    pub min_real_part: T,
    /// Boundary point attaining the sampled minimum.
    pub attained_at: C<T>,
    pub sample_count: usize,
    /// sum |a_n| log n: bounds |d/dt Re psi(it)| between samples.
    pub lipschitz_bound: T,
    /// Half-width of the inspected boundary window.
    pub t_range: T,
    /// Class threshold (1/2 for G0, 0 for G>=1).
    pub threshold: T,
    /// Uncertified band between grid points: lipschitz_bound * spacing / 2.
    pub gap: T,
    /// min_real_part - threshold; the certified margin is margin - gap.
    pub margin: T,
    /// Margin at or below the gap: the minimum touches the threshold.
    pub marginal: bool,
    /// psi recognized symbolically as an imaginary constant (class b).
    pub degenerate_imaginary_constant: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyParams<T: Real> {
    pub t_range: T,
    pub samples: usize,
    /// Largest inter-sample gap for which a non-violating grid still
    /// certifies (with the marginal flag) instead of going inconclusive.
    pub gap_tolerance: T,
}

impl<T: Real> Default for CertifyParams<T> {
    fn default() -> Self {
        CertifyParams {
            t_range: real(1e3),
            samples: 1_000_000,
            gap_tolerance: real(1e-2),
        }
    }
}

/// Sample Re psi on the boundary and certify class membership for the given
/// characteristic. The boundary is evaluated at sigma = 0 exactly: a finite
/// polynomial is entire, so no limit from the right is needed.
pub fn certify_class<T: Real>(
    c0: u32,
    psi: &DirichletPolynomial<T>,
    params: &CertifyParams<T>,
) -> Result<CertificationReport<T>> {
    if !(params.t_range > T::zero()) {
        return Err(Error::InvalidParameter(
            "certification window half-width must be positive".into(),
        ));
    }
    if params.samples < 2 {
        return Err(Error::InvalidParameter(
            "certification needs at least 2 samples".into(),
        ));
    }
    let threshold = if c0 == 0 {
        real::<T>(0.5)
    } else {
        T::zero()
    };

    // degenerate branch of the positive-characteristic condition
    let imaginary_constant =
        c0 >= 1 && psi.max_index() == 1 && psi.constant_term().re.is_zero();
    if imaginary_constant {
        return Ok(CertificationReport {
            verdict: Verdict::Certified,
            min_real_part: T::zero(),
            attained_at: C::new(T::zero(), T::zero()),
            sample_count: 0,
            lipschitz_bound: T::zero(),
            t_range: params.t_range,
            threshold,
            gap: T::zero(),
            margin: T::zero(),
            marginal: false,
            degenerate_imaginary_constant: true,
        });
    }

    // odd sample count so t = 0 is on the grid; boundary minima of real
    // coefficient symbols sit there
    let samples = params.samples | 1;
    let spacing = (params.t_range + params.t_range) / T::from_usize(samples - 1).unwrap();
    let lipschitz = psi.derivative_l1_bound();

    let chunks = 128.max(samples / 8192);
    let per_chunk = samples.div_ceil(chunks);
    use rayon::prelude::*;
    let (min_re, min_t) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut best = T::infinity();
            let mut best_t = T::zero();
            let lo = chunk * per_chunk;
            let hi = ((chunk + 1) * per_chunk).min(samples);
            for k in lo..hi {
                let t = -params.t_range + spacing * T::from_usize(k).unwrap();
                let v = psi.eval(C::new(T::zero(), t)).re;
                if v < best {
                    best = v;
                    best_t = t;
                }
            }
            (best, best_t)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((T::infinity(), T::zero()), |acc, x| {
            if x.0 < acc.0 {
                x
            } else {
                acc
            }
        });

    let scale = T::one().max(psi.terms().map(|(_, a)| a.norm()).fold(T::zero(), |a, b| a + b));
    let eps = real::<T>(1e-12) * scale;
    let gap = lipschitz * spacing * real::<T>(0.5);
    let margin = min_re - threshold;

    let verdict = if margin < -eps {
        Verdict::Failed
    } else if margin - gap >= -eps || gap <= params.gap_tolerance {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };

    Ok(CertificationReport {
        verdict,
        min_real_part: min_re,
        attained_at: C::new(T::zero(), min_t),
        sample_count: samples,
        lipschitz_bound: lipschitz,
        t_range: params.t_range,
        threshold,
        gap,
        margin,
        marginal: margin <= gap + eps,
        degenerate_imaginary_constant: false,
    })
}

/// How a symbol's class tag was established.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance<T: Real> {
    Certified(CertificationReport<T>),
    /// Explicit user override; certification was skipped.
    Assumed,
    /// Carried over from a certified symbol through a twist (vertical limits
    /// stay in the class).
    Inherited,
}

/// A symbol phi(s) = c0 s + psi(s) in the Gordon-Hedenmalm class.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Symbol<T: Real> {
    c0: u32,
    psi: DirichletPolynomial<T>,
    class: ClassTag,
    provenance: Provenance<T>,
}

impl<T: Real> Symbol<T> {
    /// Certify and construct. Fails unless the boundary check certifies.
    pub fn certify(
        c0: u32,
        psi: DirichletPolynomial<T>,
        params: &CertifyParams<T>,
    ) -> Result<Self> {
        let report = certify_class(c0, &psi, params)?;
        match report.verdict {
            Verdict::Certified => Ok(Symbol {
                c0,
                psi,
                class: if c0 == 0 { ClassTag::G0 } else { ClassTag::Gge1 },
                provenance: Provenance::Certified(report),
            }),
            verdict => Err(Error::ClassCheckFailed {
                verdict: match verdict {
                    Verdict::Failed => "failed",
                    _ => "inconclusive",
                },
                min_real_part: report.min_real_part.to_f64().unwrap_or(f64::NAN),
                threshold: report.threshold.to_f64().unwrap_or(f64::NAN),
            }),
        }
    }

    /// Construct with class membership assumed rather than checked.
    pub fn assume(c0: u32, psi: DirichletPolynomial<T>) -> Self {
        log::warn!(
            "symbol with c0 = {c0} constructed with assume_class: class membership NOT certified"
        );
        Symbol {
            c0,
            psi,
            class: if c0 == 0 { ClassTag::G0 } else { ClassTag::Gge1 },
            provenance: Provenance::Assumed,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.c0
    }

    pub fn psi(&self) -> &DirichletPolynomial<T> {
        &self.psi
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn provenance(&self) -> &Provenance<T> {
        &self.provenance
    }

    pub fn is_positive_characteristic(&self) -> bool {
        self.c0 >= 1
    }

    /// phi(s) = c0 s + psi(s).
    pub fn eval(&self, s: C<T>) -> C<T> {
        s * T::from_u32(self.c0).unwrap() + self.psi.eval(s)
    }

    /// phi'(s) = c0 + psi'(s).
    pub fn eval_derivative(&self, s: C<T>) -> C<T> {
        C::new(T::from_u32(self.c0).unwrap(), T::zero()) + self.psi.derivative().eval(s)
    }

    /// Evaluate phi and phi' together (shares the n^{-s} powers).
    pub fn eval_with_derivative(&self, s: C<T>) -> (C<T>, C<T>) {
        let c0 = T::from_u32(self.c0).unwrap();
        let mut v = s * c0;
        let mut d = C::new(c0, T::zero());
        for (n, a) in self.psi.terms() {
            if n == 1 {
                v += a;
            } else {
                let ln_n = crate::scalar::ln_index::<T>(n);
                let pw = (-s * ln_n).exp();
                v += a * pw;
                d -= a * ln_n * pw;
            }
        }
        (v, d)
    }

    /// The value at +infinity: psi's constant term when c0 = 0, unbounded
    /// otherwise.
    pub fn at_infinity(&self) -> Option<C<T>> {
        if self.c0 == 0 {
            Some(self.psi.constant_term())
        } else {
            None
        }
    }

    /// Vertical-limit twist: same characteristic, psi twisted by chi. Class
    /// membership is preserved; the certification record is inherited.
    pub fn twist(&self, chi: &Character<T>) -> Symbol<T> {
        Symbol {
            c0: self.c0,
            psi: self.psi.twist(chi),
            class: self.class,
            provenance: Provenance::Inherited,
        }
    }
}

// --- symbol file format ---

#[derive(Serialize, Deserialize)]
struct SymbolFile<T: Real> {
    c0: u32,
    psi: DirichletPolynomial<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assume_class: Option<bool>,
}

/// Parse a symbol from JSON or TOML text and certify it (unless the file
/// carries `assume_class = true`, which is honored and logged loudly).
pub fn parse_symbol<T: Real + Serialize + serde::de::DeserializeOwned>(
    text: &str,
    format: FileFormat,
    params: &CertifyParams<T>,
) -> Result<Symbol<T>> {
    let file: SymbolFile<T> = match format {
        FileFormat::Json => serde_json::from_str(text)
            .map_err(|e| Error::SymbolFile(format!("json parse: {e}")))?,
        FileFormat::Toml => {
            toml::from_str(text).map_err(|e| Error::SymbolFile(format!("toml parse: {e}")))?
        }
    };
    if file.assume_class == Some(true) {
        Ok(Symbol::assume(file.c0, file.psi))
    } else {
        Symbol::certify(file.c0, file.psi, params)
    }
}

/// Serialize a symbol back to the file format (JSON flavor).
pub fn symbol_to_json<T: Real + Serialize>(symbol: &Symbol<T>) -> String {
    let file = SymbolFile {
        c0: symbol.c0,
        psi: symbol.psi.clone(),
        assume_class: match symbol.provenance {
            Provenance::Assumed => Some(true),
            _ => None,
        },
    };
    serde_json::to_string_pretty(&file).expect("symbol serialization cannot fail")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Json,
    Toml,
}

/// Load a symbol file, inferring JSON vs TOML from the extension.
pub fn load_symbol_file<T: Real + Serialize + serde::de::DeserializeOwned>(
    path: &Path,
    params: &CertifyParams<T>,
) -> Result<Symbol<T>> {
    let text = std::fs::read_to_string(path)?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => FileFormat::Toml,
        _ => FileFormat::Json,
    };
    parse_symbol(&text, format, params)
}
