use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::qmath::{isotropic_state, states, DensityMatrix};
use crate::resources::{coincidence_check, CoincidenceReport, FreeSetSpec, TwirlingSpec};

/// The three worked resource theories.
///
/// Each distills `m` copies of a unit target from a noisy four- or
/// two-dimensional input `p psi + (1 - p) I / d`:
///
/// | theory       | input `psi`            | unit target | free states          |
/// |--------------|------------------------|-------------|----------------------|
/// | coherence    | uniform superposition on 4 levels | `|+>` | diagonal             |
/// | entanglement | Bell state             | Bell state  | PPT (= separable for two qubits) |
/// | magic        | T state                | T state     | stabilizer polytope  |
///
/// `m` coherence targets form a uniform superposition on `2^m` levels and
/// `m` entanglement targets a maximally entangled state of Schmidt rank `2^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Coherence,
    Entanglement,
    Magic,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Coherence, Theory::Entanglement, Theory::Magic];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Coherence => "coherence",
            Theory::Entanglement => "entanglement",
            Theory::Magic => "magic",
        }
    }

    pub fn resource_state(self) -> DensityMatrix {
        match self {
            Theory::Coherence => states::max_coherent(4),
            Theory::Entanglement => states::bell(),
            Theory::Magic => states::t_state(),
        }
    }

    /// `p psi + (1 - p) I / d`
    pub fn noisy_state(self, p: f64) -> Result<DensityMatrix> {
        isotropic_state(&self.resource_state(), p)
    }

    pub fn input_free_set(self) -> FreeSetSpec {
        match self {
            Theory::Coherence => FreeSetSpec::diagonal(4),
            Theory::Entanglement => FreeSetSpec::ppt(2, 2),
            Theory::Magic => FreeSetSpec::stabilizer(1),
        }
        .expect("fixed free sets are valid")
    }

    /// Largest number of target copies supported.
    pub fn max_copies(self) -> usize {
        match self {
            Theory::Coherence => 4,
            Theory::Entanglement => 2,
            Theory::Magic => 3,
        }
    }

    pub fn default_m_max(self) -> usize {
        match self {
            Theory::Coherence => 3,
            Theory::Entanglement | Theory::Magic => 1,
        }
    }

    /// Free operations cannot raise the target fidelity of isotropic inputs.
    pub fn fidelity_non_improvable(self) -> bool {
        matches!(self, Theory::Entanglement | Theory::Magic)
    }

    fn check_copies(self, m: usize) -> Result<()> {
        if m == 0 || m > self.max_copies() {
            return Err(Error::Unsupported(format!(
                "{} supports 1 to {} target copies, got {m}",
                self.name(),
                self.max_copies()
            )));
        }
        Ok(())
    }

    /// `m` copies of the unit target.
    pub fn target(self, m: usize) -> Result<DensityMatrix> {
        self.check_copies(m)?;
        Ok(match self {
            Theory::Coherence => states::max_coherent(1 << m),
            Theory::Entanglement => states::max_entangled(1 << m),
            Theory::Magic => states::t_state().tensor_power(m),
        })
    }

    pub fn target_free_set(self, m: usize) -> Result<FreeSetSpec> {
        self.check_copies(m)?;
        match self {
            Theory::Coherence => FreeSetSpec::diagonal(1 << m),
            Theory::Entanglement => FreeSetSpec::ppt(1 << m, 1 << m),
            Theory::Magic => FreeSetSpec::stabilizer(m),
        }
    }

    /// Target, free set and monotones for `m` copies; computed once per process.
    pub fn target_data(self, m: usize) -> Result<Arc<TargetData>> {
        type Cell = Arc<OnceLock<Result<Arc<TargetData>>>>;
        static CACHE: OnceLock<Mutex<HashMap<(Theory, usize), Cell>>> = OnceLock::new();
        self.check_copies(m)?;
        let cell = {
            let mut map = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
            map.entry((self, m)).or_default().clone()
        };
        cell.get_or_init(|| TargetData::compute(self, m).map(Arc::new)).clone()
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coherence" => Ok(Theory::Coherence),
            "entanglement" => Ok(Theory::Entanglement),
            "magic" => Ok(Theory::Magic),
            other => Err(Error::InvalidArgument(format!(
                "unknown theory `{other}` (expected coherence, entanglement or magic)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TargetData {
    pub theory: Theory,
    pub m: usize,
    pub target: DensityMatrix,
    pub free: FreeSetSpec,
    pub coincidence: CoincidenceReport,
    /// Free twirling onto the target, when one exists.
    pub twirling: Option<TwirlingSpec>,
}

impl TargetData {
    fn compute(theory: Theory, m: usize) -> Result<Self> {
        let target = theory.target(m)?;
        let free = theory.target_free_set(m)?;
        let coincidence = coincidence_check(&target, &free)?;
        // Only the entanglement targets admit a free state orthogonal to the
        // target; the others have no valid residual state.
        let twirling = match theory {
            Theory::Entanglement => Some(TwirlingSpec::complement(target.clone(), &free)?),
            _ => None,
        };
        log::debug!("{theory} m={m}: {coincidence:?}");
        Ok(Self {
            theory,
            m,
            target,
            free,
            coincidence,
            twirling,
        })
    }

    pub fn target_fidelity(&self) -> f64 {
        1.0 / self.coincidence.fs_inv
    }
}
