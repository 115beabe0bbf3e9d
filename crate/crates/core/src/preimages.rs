//! Preimage enumeration phi(s) = w inside rectangles of the right
//! half-plane, by the argument principle.
//!
//! The winding number (1/2 pi i) contour-integral of phi'/(phi - w) around a
//! rectangle is computed by adaptive trapezoid panels on each side. A panel
//! is accepted only when its Richardson error estimate is below its share of
//! the side budget and the phase of phi - w turns less than a quarter turn
//! across each half, which prevents the quadrature from aliasing past a
//! zero. The integral must then land on an integer within 0.25 (real part
//! within 0.25 of zero as a cross-check) or the contour is refined; if a
//! sample gets within `tol` of a zero the whole attempt is abandoned as a
//! boundary hit and the caller's window is jittered.
//!
//! Rectangles with winding >= 2 are bisected (cut positions walk a fixed
//! fraction sequence so a root on the cut line cannot wedge the recursion)
//! until each piece holds a single root, polished by damped Newton, or a
//! cluster below the diameter floor, reported once with its multiplicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, Real, C};
use crate::symbol::Symbol;

/// Search window in the open right half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle<T: Real> {
    pub sigma_lo: T,
    pub sigma_hi: T,
    pub t_lo: T,
    pub t_hi: T,
}

impl<T: Real> Rectangle<T> {
    pub fn new(sigma_lo: T, sigma_hi: T, t_lo: T, t_hi: T) -> Result<Self> {
        if !(T::zero() < sigma_lo && sigma_lo < sigma_hi && t_lo < t_hi) {
            return Err(Error::InvalidParameter(format!(
                "invalid rectangle [{sigma_lo}, {sigma_hi}] x [{t_lo}, {t_hi}]"
            )));
        }
        Ok(Rectangle {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        })
    }

    pub fn width(&self) -> T {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> T {
        self.t_hi - self.t_lo
    }

    pub fn diameter(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> C<T> {
        let half = real::<T>(0.5);
        C::new(
            (self.sigma_lo + self.sigma_hi) * half,
            (self.t_lo + self.t_hi) * half,
        )
    }

    pub fn contains(&self, s: C<T>, margin: T) -> bool {
        s.re > self.sigma_lo + margin
            && s.re < self.sigma_hi - margin
            && s.im > self.t_lo + margin
            && s.im < self.t_hi - margin
    }

    fn split(&self, fraction: T) -> (Rectangle<T>, Rectangle<T>) {
        if self.width() >= self.height() {
            let cut = self.sigma_lo + self.width() * fraction;
            (
                Rectangle {
                    sigma_hi: cut,
                    ..*self
                },
                Rectangle {
                    sigma_lo: cut,
                    ..*self
                },
            )
        } else {
            let cut = self.t_lo + self.height() * fraction;
            (
                Rectangle { t_hi: cut, ..*self },
                Rectangle { t_lo: cut, ..*self },
            )
        }
    }

    fn corners(&self) -> [C<T>; 4] {
        [
            C::new(self.sigma_lo, self.t_lo),
            C::new(self.sigma_hi, self.t_lo),
            C::new(self.sigma_hi, self.t_hi),
            C::new(self.sigma_lo, self.t_hi),
        ]
    }
}

/// One preimage (or unresolved cluster of preimages).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Root<T: Real> {
    pub location: C<T>,
    pub multiplicity: u32,
    /// |phi(location) - w|.
    pub residual: T,
    /// False when Newton stalled and the root is kept with its residual.
    pub polished: bool,
}

/// All preimages of w inside a window, with the certified outer winding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSet<T: Real> {
    pub roots: Vec<Root<T>>,
    /// Window actually searched (jittered from the request on retries).
    pub window: Rectangle<T>,
    pub total_winding: u32,
    pub warnings: Vec<String>,
}

impl<T: Real> RootSet<T> {
    pub fn multiplicity_sum(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Sum of g(Re s) * multiplicity over roots.
    pub fn sum_over_roots(&self, g: impl Fn(C<T>) -> T) -> T {
        let mut acc = T::zero();
        for r in &self.roots {
            acc = acc + g(r.location) * T::from_u32(r.multiplicity).unwrap();
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PreimageParams<T: Real> {
    /// Subdivision floor: unresolved winding inside a rectangle of this
    /// diameter is reported as one root with multiplicity.
    pub cluster_diameter: T,
    /// Cells below this diameter whose cuts are all blocked by cancellation
    /// noise (near-multiple roots) are promoted to clusters early.
    pub cluster_promotion: T,
    /// Residuals above this are flagged as unpolished.
    pub residual_limit: T,
    /// Jittered window retries after a boundary hit.
    pub max_retries: usize,
    /// Per-side quadrature budget, as a fraction of 2 pi.
    pub side_tolerance: T,
    pub max_panel_depth: usize,
}

impl<T: Real> Default for PreimageParams<T> {
    fn default() -> Self {
        PreimageParams {
            cluster_diameter: real(1e-8),
            cluster_promotion: real(4e-5),
            residual_limit: real(1e-9),
            max_retries: 5,
            side_tolerance: real(2.5e-4),
            max_panel_depth: 52,
        }
    }
}

/// Errors internal to one enumeration attempt; all recoverable by jitter.
enum Attempt {
    BoundaryHit,
    Uncertain(f64),
}

/// Find all preimages of `w` under `phi` inside `window`.
///
/// `tol` is the geometric resolution: roots within `tol` of the contour
/// trigger a jittered retry (up to 5, jitter at most 10 tol), and clusters
/// are not resolved below diameter `tol`.
pub fn find_preimages<T: Real>(
    phi: &Symbol<T>,
    w: C<T>,
    window: &Rectangle<T>,
    tol: T,
) -> Result<RootSet<T>> {
    let params = PreimageParams {
        cluster_diameter: tol,
        ..PreimageParams::default()
    };
    find_preimages_with(phi, w, window, &params)
}

pub fn find_preimages_with<T: Real>(
    phi: &Symbol<T>,
    w: C<T>,
    window: &Rectangle<T>,
    params: &PreimageParams<T>,
) -> Result<RootSet<T>> {
    let mut rng = jitter_rng(w, window);
    let mut last_residual = 0.0;
    for attempt in 0..=params.max_retries {
        let win = if attempt == 0 {
            *window
        } else {
            jitter_window(window, &mut rng, params.cluster_diameter * real(10.0))
        };
        let search = Search {
            phi,
            w,
            params,
            tol: params.cluster_diameter,
        };
        match search.enumerate(&win) {
            Ok((mut roots, outer)) => {
                let mult: u32 = roots.iter().map(|r| r.multiplicity).sum();
                if mult != outer {
                    // a root escaped through a cut; treat like a boundary hit
                    continue;
                }
                roots.sort_by(|a, b| {
                    (a.location.im, a.location.re)
                        .partial_cmp(&(b.location.im, b.location.re))
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
                let warnings: Vec<String> = roots
                    .iter()
                    .filter(|r| !r.polished)
                    .map(|r| {
                        format!(
                            "newton stalled at {} with residual {:e}",
                            r.location, r.residual
                        )
                    })
                    .collect();
                return Ok(RootSet {
                    roots,
                    window: win,
                    total_winding: outer,
                    warnings,
                });
            }
            Err(Attempt::BoundaryHit) => continue,
            Err(Attempt::Uncertain(res)) => {
                last_residual = res;
                continue;
            }
        }
    }
    if last_residual != 0.0 {
        Err(Error::WindingUncertain {
            residual: last_residual,
        })
    } else {
        Err(Error::BoundaryHit {
            attempts: params.max_retries,
        })
    }
}

fn jitter_rng<T: Real>(w: C<T>, window: &Rectangle<T>) -> ChaCha8Rng {
    // deterministic seed from the exact bit patterns of (w, window)
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in [
        w.re, w.im,
        window.sigma_lo,
        window.sigma_hi,
        window.t_lo,
        window.t_hi,
    ] {
        let bits = x.to_f64().map(f64::to_bits).unwrap_or(0);
        for byte in bits.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn jitter_window<T: Real>(
    window: &Rectangle<T>,
    rng: &mut ChaCha8Rng,
    scale: T,
) -> Rectangle<T> {
    let mut d = || real::<T>(rng.gen_range(-1.0..1.0)) * scale;
    let sigma_lo = (window.sigma_lo + d()).max(window.sigma_lo * real(0.5));
    Rectangle {
        sigma_lo,
        sigma_hi: (window.sigma_hi + d()).max(sigma_lo + window.width() * real(0.5)),
        t_lo: window.t_lo + d(),
        t_hi: window.t_hi + d(),
    }
}

struct Search<'a, T: Real> {
    phi: &'a Symbol<T>,
    w: C<T>,
    params: &'a PreimageParams<T>,
    tol: T,
}

impl<T: Real> Search<'_, T> {
    fn enumerate(&self, rect: &Rectangle<T>) -> std::result::Result<(Vec<Root<T>>, u32), Attempt> {
        if self.excluded(rect) {
            return Ok((Vec::new(), 0));
        }
        let outer = self.winding(rect)?;
        let roots = self.collect(rect, outer, 0)?;
        Ok((roots, outer))
    }

    /// Range bound: the linear part keeps |phi - w| positive on the whole
    /// rectangle once the series tail is subtracted.
    fn excluded(&self, rect: &Rectangle<T>) -> bool {
        let psi = self.phi.psi();
        let a1 = psi.constant_term();
        let tail = psi.tail_bound(rect.sigma_lo);
        let c0 = T::from_u32(self.phi.characteristic()).unwrap();
        if self.phi.characteristic() == 0 {
            (self.w - a1).norm() > tail
        } else {
            let z = (self.w - a1) / c0;
            let dx = (rect.sigma_lo - z.re).max(z.re - rect.sigma_hi).max(T::zero());
            let dy = (rect.t_lo - z.im).max(z.im - rect.t_hi).max(T::zero());
            c0 * dx.hypot(dy) > tail
        }
    }

    fn collect(
        &self,
        rect: &Rectangle<T>,
        winding: u32,
        depth: usize,
    ) -> std::result::Result<Vec<Root<T>>, Attempt> {
        if winding == 0 {
            return Ok(Vec::new());
        }
        if winding == 1 {
            if let Some(root) = self.newton(rect.center(), rect) {
                return Ok(vec![root]);
            }
        }
        if rect.diameter() <= self.tol {
            // multiplicity cluster at the subdivision floor
            let center = rect.center();
            let residual = (self.phi.eval(center) - self.w).norm();
            return Ok(vec![Root {
                location: center,
                multiplicity: winding,
                residual,
                polished: residual <= self.params.residual_limit,
            }]);
        }
        // cut-position sequence sidesteps roots sitting on a cut line
        for &fraction in &[0.5, 0.46875, 0.53125, 0.40625, 0.59375, 0.625] {
            let (left, right) = rect.split(real(fraction));
            let wl = if self.excluded(&left) {
                Ok(0)
            } else {
                self.winding(&left)
            };
            let wr = if self.excluded(&right) {
                Ok(0)
            } else {
                self.winding(&right)
            };
            match (wl, wr) {
                (Ok(a), Ok(b)) if a + b == winding => {
                    let (ra, rb) = if depth < 4 {
                        let (ra, rb) = rayon::join(
                            || self.collect(&left, a, depth + 1),
                            || self.collect(&right, b, depth + 1),
                        );
                        (ra?, rb?)
                    } else {
                        (
                            self.collect(&left, a, depth + 1)?,
                            self.collect(&right, b, depth + 1)?,
                        )
                    };
                    let mut out = ra;
                    out.extend(rb);
                    return Ok(out);
                }
                _ => continue,
            }
        }
        // Every cut position is blocked: the winding mass sits so close to
        // any cut that phi - w cannot be evaluated there above cancellation
        // noise. That only happens around (near-)multiple roots. Promote the
        // cell to a cluster once it is small enough that the center is a
        // faithful representative; otherwise report the hit so the caller's
        // window gets jittered.
        if rect.diameter() <= self.params.cluster_promotion {
            let center = rect.center();
            let residual = (self.phi.eval(center) - self.w).norm();
            return Ok(vec![Root {
                location: center,
                multiplicity: winding,
                residual,
                polished: residual <= self.params.residual_limit,
            }]);
        }
        Err(Attempt::BoundaryHit)
    }

    /// Damped Newton from `start`; accepted only if the polished root lies
    /// strictly inside `rect` (winding 1 there guarantees it is the root).
    fn newton(&self, start: C<T>, rect: &Rectangle<T>) -> Option<Root<T>> {
        let target = real::<T>(1e-13) * (T::one() + self.w.norm());
        let mut s = start;
        let mut best = (s, T::infinity());
        for _ in 0..80 {
            let (v, d) = self.phi.eval_with_derivative(s);
            let g = v - self.w;
            let r = g.norm();
            if r < best.1 {
                best = (s, r);
            }
            if r <= target {
                break;
            }
            if d.norm() < real::<T>(1e-290) {
                break;
            }
            let full = g / d;
            let mut lambda = T::one();
            let mut accepted = false;
            for _ in 0..24 {
                let cand = s - full * lambda;
                let rc = (self.phi.eval(cand) - self.w).norm();
                if rc < r * (T::one() - lambda * real(0.25)) {
                    s = cand;
                    accepted = true;
                    break;
                }
                lambda = lambda * real(0.5);
            }
            if !accepted {
                break;
            }
        }
        let (loc, residual) = best;
        let margin = real::<T>(1e-14) * rect.diameter();
        if !rect.contains(loc, margin) {
            return None;
        }
        if residual <= target {
            return Some(Root {
                location: loc,
                multiplicity: 1,
                residual,
                polished: true,
            });
        }
        if residual <= self.params.residual_limit {
            return Some(Root {
                location: loc,
                multiplicity: 1,
                residual,
                polished: true,
            });
        }
        // NonconvergentNewton: keep the best point, flagged, only when the
        // cell is already at the resolution floor; otherwise keep bisecting
        if rect.diameter() <= self.tol * real(4.0) {
            return Some(Root {
                location: loc,
                multiplicity: 1,
                residual,
                polished: false,
            });
        }
        None
    }

    /// Certified winding number of phi - w around the rectangle.
    fn winding(&self, rect: &Rectangle<T>) -> std::result::Result<u32, Attempt> {
        let corners = rect.corners();
        let two_pi = T::PI() + T::PI();
        let mut tol = self.params.side_tolerance * two_pi;
        for _escalation in 0..3 {
            let mut total = C::new(T::zero(), T::zero());
            let mut err = T::zero();
            let mut ok = true;
            for i in 0..4 {
                match self.side_integral(corners[i], corners[(i + 1) % 4], tol) {
                    Ok((value, e)) => {
                        total += value;
                        err = err + e;
                    }
                    Err(Attempt::BoundaryHit) => return Err(Attempt::BoundaryHit),
                    Err(Attempt::Uncertain(_)) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                tol = tol * real(0.125);
                continue;
            }
            let wind = total.im / two_pi;
            let rounded = wind.round();
            let residual = (wind - rounded).abs().max(total.re.abs() / two_pi);
            let quarter = real::<T>(0.25);
            if residual <= quarter && err / two_pi <= quarter && rounded >= T::zero() {
                return Ok(rounded.to_u32().unwrap_or(0));
            }
            tol = tol * real(0.125);
        }
        Err(Attempt::Uncertain(0.5))
    }

    /// Integral of phi'/(phi - w) along one segment by adaptive panels.
    fn side_integral(
        &self,
        a: C<T>,
        b: C<T>,
        tol: T,
    ) -> std::result::Result<(C<T>, T), Attempt> {
        let dir = b - a;
        // root-on-contour guard: fire when the estimated distance to the
        // nearest zero (|g|/|phi'| for simple zeros) drops below a fraction
        // of the resolution, or when g = phi - w is pure cancellation noise
        // and cannot be evaluated to any relative accuracy
        let guard = self.tol * real(1.0 / 16.0);
        let eps = T::epsilon();
        let noise_gate = real::<T>(128.0) * eps;
        let eval = |t: T| -> std::result::Result<Sample<T>, Attempt> {
            let s = a + dir * t;
            let (v, d) = self.phi.eval_with_derivative(s);
            let g = v - self.w;
            let gn = g.norm();
            let magnitude = v.norm() + self.w.norm();
            if gn <= guard * d.norm() || gn <= noise_gate * magnitude || gn < real(1e-280) {
                return Err(Attempt::BoundaryHit);
            }
            let h = d / g;
            // |h| carries the relative cancellation error of g
            let noise = h.norm() * eps * (real::<T>(2.0) + magnitude / gn);
            Ok(Sample { h, noise })
        };
        #[derive(Clone, Copy)]
        struct Sample<T: Real> {
            h: C<T>,
            noise: T,
        }
        struct Frame<T: Real> {
            t0: T,
            t1: T,
            s0: Sample<T>,
            s1: Sample<T>,
            depth: usize,
        }
        let s0 = eval(T::zero())?;
        let s1 = eval(T::one())?;
        let mut stack = vec![Frame {
            t0: T::zero(),
            t1: T::one(),
            s0,
            s1,
            depth: 0,
        }];
        let mut total = C::new(T::zero(), T::zero());
        let mut err_total = T::zero();
        let half = real::<T>(0.5);
        while let Some(f) = stack.pop() {
            if f.depth > self.params.max_panel_depth {
                return Err(Attempt::BoundaryHit);
            }
            let tm = (f.t0 + f.t1) * half;
            let sm = eval(tm)?;
            let len = f.t1 - f.t0;
            let coarse = (f.s0.h + f.s1.h) * half * len;
            let fine = (f.s0.h + sm.h + sm.h + f.s1.h) * real::<T>(0.25) * len;
            let delta = (fine - coarse).norm();
            // quarter-turn phase guard: h = (log(phi - w))', so the phase
            // advance of phi - w across a half-panel is ~ Im(h * ds)
            let ds_half = dir * (len * half);
            let quarter_turn = T::FRAC_PI_2();
            let phase_ok = ((f.s0.h + sm.h) * half * ds_half).im.abs() < quarter_turn
                && ((sm.h + f.s1.h) * half * ds_half).im.abs() < quarter_turn;
            // panels cannot resolve below the cancellation noise of their
            // own samples; the floor is charged to the error budget
            let noise_floor =
                (f.s0.noise + sm.noise + sm.noise + f.s1.noise) * real::<T>(0.25) * len;
            if phase_ok && delta <= (tol * len).max(noise_floor * real(4.0)) {
                // Richardson: Simpson value from the two trapezoid levels
                total += (fine * real::<T>(4.0) - coarse) / real::<T>(3.0);
                err_total = err_total + (delta / real::<T>(3.0)).max(noise_floor);
            } else {
                stack.push(Frame {
                    t0: f.t0,
                    t1: tm,
                    s0: f.s0,
                    s1: sm,
                    depth: f.depth + 1,
                });
                stack.push(Frame {
                    t0: tm,
                    t1: f.t1,
                    s0: sm,
                    s1: f.s1,
                    depth: f.depth + 1,
                });
            }
        }
        total *= dir;
        Ok((total, err_total * dir.norm()))
    }
}
