use crate::error::{invalid, Error, Result};

/// Biparabolic cylinder `B_r(x0) × (t0 − r⁴, t0 + r⁴)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub x0: f64,
    pub t0: f64,
    pub r: f64,
}

/// Time interval of a cylinder intersected with a field's range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub clipped: bool,
}

impl Cylinder {
    pub fn new(x0: f64, t0: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return invalid(format!("cylinder radius must be positive (got {r})"));
        }
        if !(x0.is_finite() && t0.is_finite()) {
            return invalid("cylinder center must be finite");
        }
        Ok(Self { x0, t0, r })
    }

    pub fn at_origin(r: f64) -> Result<Self> {
        Self::new(0.0, 0.0, r)
    }

    pub fn half_height(&self) -> f64 {
        self.r.powi(4)
    }

    /// Unclipped space-time volume `2r · 2r⁴`.
    pub fn volume(&self) -> f64 {
        4.0 * self.r.powi(5)
    }

    /// Same center, radius scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.x0, self.t0, self.r * factor)
    }

    /// The ball must embed in the torus without self-overlap.
    pub fn check_embeds(&self, period: f64) -> Result<()> {
        if 2.0 * self.r > period * (1.0 + 1e-12) {
            return invalid(format!(
                "cylinder diameter {} exceeds the period {period}",
                2.0 * self.r
            ));
        }
        Ok(())
    }

    /// Intersects the time interval with `span`; errors when they are disjoint.
    pub fn window(&self, span: (f64, f64)) -> Result<Window> {
        let h = self.half_height();
        let (lo, hi) = (self.t0 - h, self.t0 + h);
        let (start, end) = span;
        let eps = 1e-12 * (1.0 + start.abs().max(end.abs()));
        let a = lo.max(start);
        let b = hi.min(end);
        if b < a {
            return Err(Error::EmptyWindow { lo, hi, start, end });
        }
        Ok(Window {
            a,
            b,
            clipped: lo < start - eps || hi > end + eps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_flag_tracks_the_range() {
        let c = Cylinder::new(0.0, 0.0, 0.5).unwrap();
        let w = c.window((-1.0, 1.0)).unwrap();
        assert!(!w.clipped);
        assert_eq!((w.a, w.b), (-0.0625, 0.0625));
        let w = c.window((0.0, 1.0)).unwrap();
        assert!(w.clipped);
        assert_eq!(w.a, 0.0);
        assert!(c.window((0.1, 1.0)).is_err());
        assert!(Cylinder::new(0.0, 0.0, 4.0).unwrap().check_embeds(6.2).is_err());
        assert!(Cylinder::new(0.0, 0.0, 0.0).is_err());
    }
}
