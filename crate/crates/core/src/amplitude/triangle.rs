use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Transverse momenta of the incoming electron, outgoing electron and photon,
/// all as `p·c` in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub s_i: f64,
    pub s_f: f64,
    pub s_ph: f64,
}

/// Interior angles opposite `s_i`, `s_f`, `s_ph`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleAngles {
    pub alpha_i: f64,
    pub alpha_f: f64,
    pub alpha_ph: f64,
}

impl TriangleSides {
    pub fn new(s_i: f64, s_f: f64, s_ph: f64) -> Result<Self> {
        if [s_i, s_f, s_ph].iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(domain(format!(
                "triangle sides must be finite and non-negative: ({s_i}, {s_f}, {s_ph})"
            )));
        }
        Ok(Self { s_i, s_f, s_ph })
    }

    pub fn max_side(&self) -> f64 {
        self.s_i.max(self.s_f).max(self.s_ph)
    }

    pub fn is_formable(&self) -> bool {
        triangle_area(self).is_some()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            s_i: self.s_i * k,
            s_f: self.s_f * k,
            s_ph: self.s_ph * k,
        }
    }
}

/// Area of the triangle with the given sides, `None` if the triangle
/// inequality fails. Uses Kahan's sorted-sides product, which returns an exact
/// zero on the degenerate boundary.
pub fn triangle_area(sides: &TriangleSides) -> Option<f64> {
    let mut v = [sides.s_i, sides.s_f, sides.s_ph];
    if v.iter().any(|s| !(*s >= 0.0)) {
        return None;
    }
    v.sort_by(|a, b| b.total_cmp(a));
    let [a, b, c] = v;
    let gap = c - (a - b);
    if gap < 0.0 {
        return None;
    }
    let prod = (a + (b + c)) * gap * (c + (a - b)) * (a + (b - c));
    Some(0.25 * prod.max(0.0).sqrt())
}

/// Interior angles from the sides. The triangle must be formable and non-degenerate.
pub fn triangle_angles(sides: &TriangleSides) -> Result<TriangleAngles> {
    let area = triangle_area(sides)
        .ok_or_else(|| domain(format!("sides {sides:?} do not form a triangle")))?;
    if area == 0.0 {
        return Err(domain(format!("sides {sides:?} form a degenerate triangle")));
    }
    let (a, b, c) = (sides.s_i, sides.s_f, sides.s_ph);
    // tan α = 4S / (b² + c² − a²) for the angle α opposite a.
    let angle = |opp: f64, x: f64, y: f64| (4.0 * area).atan2((x - opp) * (x + opp) + y * y);
    let alpha_i = angle(a, b, c);
    let alpha_f = angle(b, c, a);
    let alpha_ph = angle(c, a, b);
    debug_assert!((alpha_i + alpha_f + alpha_ph - PI).abs() < 1e-9);
    Ok(TriangleAngles {
        alpha_i,
        alpha_f,
        alpha_ph,
    })
}
