//! Default acceptance tolerances.
//!
//! All residuals are relative unless noted; "relative" means scaled by
//! `max(1, |reference|)`.

/// `μ_γ(η) = η`, componentwise relative.
pub const FIXED_POINT: f64 = 1e-9;

/// `μ_γ^P(Y) = Y` at random positive points.
pub const PERIODICITY: f64 = 1e-8;

/// Characteristic polynomial coefficients against closed forms.
pub const CHARPOLY: f64 = 1e-7;

/// Analytic against central-difference Jacobian.
pub const FD_JACOBIAN: f64 = 1e-5;

/// Step for the central differences.
pub const FD_STEP: f64 = 1e-6;

/// `J^P = I`, entrywise.
pub const JACOBIAN_POWER: f64 = 1e-7;

/// Newton solution against the assembled fixed point.
pub const NEWTON_AGREEMENT: f64 = 1e-8;

/// Q-system, Y-system and closed-form Q/Y values.
pub const QY_SYSTEM: f64 = 1e-9;

/// Printed rational Y values.
pub const PRINTED_Y: f64 = 1e-12;

/// Distance of an eigenvalue from the snapped root of unity.
pub const ROOT_SNAP: f64 = 1e-6;

/// Exactness of the N/D division (scaled by the largest coefficient of N).
pub const DIVISION: f64 = 1e-7;

/// Block decomposition of the type C Jacobian and printed block entries.
pub const BLOCKS: f64 = 1e-9;

/// Determinant identities sampled on the unit circle.
pub const IDENTITY: f64 = 1e-7;

/// Eigenvector lemmas, `‖Jψ − λψ‖∞ / ‖ψ‖∞`.
pub const LEMMA: f64 = 1e-8;

/// Printed eigen-equation relations against the Jacobian.
pub const RELATIONS: f64 = 1e-9;

/// Multiplicative scaling of every tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub fixed_point: f64,
    pub periodicity: f64,
    pub charpoly: f64,
    pub fd_jacobian: f64,
    pub jacobian_power: f64,
    pub newton: f64,
    pub qy_system: f64,
    pub printed_y: f64,
    pub root_snap: f64,
    pub division: f64,
    pub blocks: f64,
    pub identity: f64,
    pub lemma: f64,
    pub relations: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fixed_point: FIXED_POINT,
            periodicity: PERIODICITY,
            charpoly: CHARPOLY,
            fd_jacobian: FD_JACOBIAN,
            jacobian_power: JACOBIAN_POWER,
            newton: NEWTON_AGREEMENT,
            qy_system: QY_SYSTEM,
            printed_y: PRINTED_Y,
            root_snap: ROOT_SNAP,
            division: DIVISION,
            blocks: BLOCKS,
            identity: IDENTITY,
            lemma: LEMMA,
            relations: RELATIONS,
        }
    }
}

impl Tolerances {
    pub fn scaled(mut self, s: f64) -> Self {
        for t in [
            &mut self.fixed_point,
            &mut self.periodicity,
            &mut self.charpoly,
            &mut self.fd_jacobian,
            &mut self.jacobian_power,
            &mut self.newton,
            &mut self.qy_system,
            &mut self.printed_y,
            &mut self.root_snap,
            &mut self.division,
            &mut self.blocks,
            &mut self.identity,
            &mut self.lemma,
            &mut self.relations,
        ] {
            *t *= s;
        }
        self
    }

    pub fn all_positive(&self) -> bool {
        [
            self.fixed_point,
            self.periodicity,
            self.charpoly,
            self.fd_jacobian,
            self.jacobian_power,
            self.newton,
            self.qy_system,
            self.printed_y,
            self.root_snap,
            self.division,
            self.blocks,
            self.identity,
            self.lemma,
            self.relations,
        ]
        .iter()
        .all(|t| *t > 0.0 && t.is_finite())
    }
}

/// `|a − b| / max(1, |b|)`.
pub fn rel(a: f64, b: f64) -> f64 {
    libm::fabs(a - b) / libm::fmax(1.0, libm::fabs(b))
}
