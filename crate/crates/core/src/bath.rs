//! Thermal bosonic baths: occupations, discretized spectra, correlation
//! kernels and the time-dependent rate coefficients of the second-order
//! master equation.
//!
//! Units: ħ = k_B = 1, frequencies and temperatures in units of the qubit
//! frequency. The total coupling strength is Γ = Σ_k g_k² = κ².

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Sign of the mode frequency in the detuning d_k = ω ± Ω_k.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceConvention {
    /// d_k = ω + Ω_k.
    AsWritten,
    /// d_k = ω − Ω_k (co-rotating exchange terms).
    #[default]
    Resonant,
}

impl ResonanceConvention {
    /// Sign σ such that Φ(σ·s) appears in the memory integrals.
    pub fn kernel_sign(self) -> f64 {
        match self {
            ResonanceConvention::AsWritten => 1.0,
            ResonanceConvention::Resonant => -1.0,
        }
    }

    fn detuning(self, omega: f64, mode: f64) -> f64 {
        match self {
            ResonanceConvention::AsWritten => omega + mode,
            ResonanceConvention::Resonant => omega - mode,
        }
    }
}

/// Frequency window of the discretized bath.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralWindow {
    /// Every mode sits at the frequency of the qubit it couples to.
    #[default]
    QubitResonant,
    /// Modes uniformly spaced on [min, max].
    Range { min: f64, max: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub temperature: f64,
    pub kappa: f64,
    pub n_modes: usize,
    pub window: SpectralWindow,
    pub convention: ResonanceConvention,
}

impl Default for BathSpec {
    fn default() -> Self {
        Self {
            temperature: 0.2,
            kappa: 0.01,
            n_modes: 1,
            window: SpectralWindow::QubitResonant,
            convention: ResonanceConvention::Resonant,
        }
    }
}

impl BathSpec {
    pub fn new(temperature: f64, kappa: f64) -> Result<Self> {
        let spec = Self {
            temperature,
            kappa,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_window(mut self, min: f64, max: f64, n_modes: usize) -> Result<Self> {
        self.window = SpectralWindow::Range { min, max };
        self.n_modes = n_modes;
        self.validate()?;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: ResonanceConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Γ = κ².
    pub fn gamma(&self) -> f64 {
        self.kappa * self.kappa
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::param("temperature", format!("must be > 0, got {}", self.temperature)));
        }
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be >= 0, got {}", self.kappa)));
        }
        if self.n_modes == 0 {
            return Err(Error::param("n_modes", "must be >= 1"));
        }
        if let SpectralWindow::Range { min, max } = self.window {
            if !(min >= 0.0) || !(min <= max) || !max.is_finite() {
                return Err(Error::param(
                    "window",
                    format!("need 0 <= min <= max, got [{min}, {max}]"),
                ));
            }
        }
        Ok(())
    }

    /// Mode set, occupation and convention for a qubit of frequency `omega`.
    pub fn resolve(&self, omega: f64) -> Result<ResolvedBath> {
        self.validate()?;
        Ok(ResolvedBath {
            omega,
            occupation: bose_occupation(omega, self.temperature)?,
            modes: discretize_spectrum(self, omega)?,
            convention: self.convention,
            gamma: self.gamma(),
        })
    }
}

/// Discretized bath modes (Ω_k, g_k).
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet {
    pub modes: Vec<(f64, f64)>,
}

impl ModeSet {
    pub fn total_strength(&self) -> f64 {
        self.modes.iter().map(|(_, g)| g * g).sum()
    }
}

/// n = 1/(e^{ω/T} − 1).
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::param("omega", format!("must be > 0, got {omega}")));
    }
    if !(temperature > 0.0) {
        return Err(Error::param("temperature", format!("must be > 0, got {temperature}")));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Equal-weight modes g_k² = κ²/N on the bath's spectral window. With the default
/// window every mode sits at `qubit_omega`.
pub fn discretize_spectrum(spec: &BathSpec, qubit_omega: f64) -> Result<ModeSet> {
    spec.validate()?;
    let n = spec.n_modes;
    let g = (spec.gamma() / n as f64).sqrt();
    let (lo, hi) = match spec.window {
        SpectralWindow::QubitResonant => (qubit_omega, qubit_omega),
        SpectralWindow::Range { min, max } => (min, max),
    };
    let modes = (0..n)
        .map(|k| {
            let w = if n == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            };
            (w, g)
        })
        .collect();
    Ok(ModeSet { modes })
}

/// ∫₀ᵗ e^{i x s} ds, continuous through x = 0.
pub fn phase_integral(x: f64, t: f64) -> C64 {
    let z = C64::new(0.0, x * t);
    let e = if z.norm() < 1e-3 {
        C64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0
    } else {
        (z.exp() - 1.0) / z
    };
    e * t
}

/// A bath spec bound to the frequency of the qubit(s) it couples to.
#[derive(Clone, Debug)]
pub struct ResolvedBath {
    pub omega: f64,
    pub occupation: f64,
    pub modes: ModeSet,
    pub convention: ResonanceConvention,
    pub gamma: f64,
}

impl ResolvedBath {
    /// Φ₁₂(τ) = Σ g² e^{iΩτ}(n+1).
    pub fn phi12(&self, tau: f64) -> C64 {
        let n1 = self.occupation + 1.0;
        self.modes
            .modes
            .iter()
            .map(|&(w, g)| C64::from_polar(g * g * n1, w * tau))
            .sum()
    }

    /// Φ₂₁(τ) = Σ g² e^{−iΩτ} n.
    pub fn phi21(&self, tau: f64) -> C64 {
        let n = self.occupation;
        self.modes
            .modes
            .iter()
            .map(|&(w, g)| C64::from_polar(g * g * n, -w * tau))
            .sum()
    }

    /// (c_down(t), c_up(t)).
    pub fn rate_coefficients(&self, t: f64) -> (C64, C64) {
        let n = self.occupation;
        let mut down = C64::new(0.0, 0.0);
        let mut up = C64::new(0.0, 0.0);
        for &(w, g) in &self.modes.modes {
            let d = self.convention.detuning(self.omega, w);
            let g2 = g * g;
            down += phase_integral(d, t) * (g2 * (n + 1.0));
            up += phase_integral(-d, t) * (g2 * n);
        }
        (down, up)
    }

    /// (γ_down, γ_up) = (Γ(n+1), Γn).
    pub fn lindblad_rates(&self) -> (f64, f64) {
        (self.gamma * (self.occupation + 1.0), self.gamma * self.occupation)
    }
}

/// Φ_{αα'}(τ) for α, α' ∈ {1, 2}.
pub fn correlation_kernel(
    alpha: u8,
    alpha_prime: u8,
    tau: f64,
    spec: &BathSpec,
    qubit_omega: f64,
) -> Result<C64> {
    let bath = spec.resolve(qubit_omega)?;
    match (alpha, alpha_prime) {
        (1, 1) | (2, 2) => Ok(C64::new(0.0, 0.0)),
        (1, 2) => Ok(bath.phi12(tau)),
        (2, 1) => Ok(bath.phi21(tau)),
        _ => Err(Error::param(
            "alpha",
            format!("kernel indices must be 1 or 2, got ({alpha}, {alpha_prime})"),
        )),
    }
}

/// c_down(t) = Σ g²(−i(n+1)/d)(e^{itd} − 1), c_up(t) = Σ g²(i n/d)(e^{−itd} − 1).
pub fn rate_coefficients(t: f64, spec: &BathSpec, qubit_omega: f64) -> Result<(C64, C64)> {
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be >= 0, got {t}")));
    }
    Ok(spec.resolve(qubit_omega)?.rate_coefficients(t))
}

pub fn lindblad_rates(spec: &BathSpec, qubit_omega: f64) -> Result<(f64, f64)> {
    Ok(spec.resolve(qubit_omega)?.lindblad_rates())
}
