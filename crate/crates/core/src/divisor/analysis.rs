use serde::Serialize;

use super::assemble::{assemble_divisors, kp_oval_check, parity_check, Divisors, OvalCountReport, ParityReport};
use super::waves::{choose_t0, divisor_numbers, t0_defect, NetworkDivisor, T0Choice, T0Options, WaveEvaluator};
use super::DivisorError;
use crate::curve::{build_curve, CurveModel};
use crate::edges::{edge_vector_system, modify_tableau, EdgeVectorSystem, ModifiedNetwork};
use crate::le::LeTableau;
use crate::soliton::{sato_at, SolitonData, Times};

/// Everything the divisor pipeline produces for one tableau and phase set.
#[derive(Clone, Debug)]
pub struct DivisorAnalysis {
    pub mn: ModifiedNetwork,
    pub evs: EdgeVectorSystem,
    pub sd: SolitonData,
    pub choice: T0Choice,
    pub numbers: NetworkDivisor,
    pub curve: CurveModel,
    pub divisors: Divisors,
    pub parity: ParityReport,
    pub kp_ovals: OvalCountReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorChecks {
    pub parity: bool,
    pub kp_ovals: bool,
    pub kp_degree: bool,
    pub sato_on_gamma0: bool,
}

impl DivisorChecks {
    pub fn all(&self) -> bool {
        self.parity && self.kp_ovals && self.kp_degree && self.sato_on_gamma0
    }
}

impl DivisorAnalysis {
    /// Runs the pipeline; `x0` skips the search and only validates that time.
    pub fn run(tab: &LeTableau, kappa: Vec<f64>, opts: &T0Options, x0: Option<f64>) -> Result<Self, DivisorError> {
        let mn = modify_tableau(tab);
        let evs = edge_vector_system(&mn);
        let sd = SolitonData::from_tableau(kappa, tab)?;
        let choice = match x0 {
            None => choose_t0(&mn, &evs, &sd, opts)?,
            Some(x) => {
                let t0 = Times::from_pairs([(1, x)]);
                let (vacuum, dressed) = WaveEvaluator::new(&evs, &sd).at(&t0);
                if let Some(defect) = t0_defect(&mn, &evs, &vacuum, &dressed, opts.zero_tol) {
                    return Err(DivisorError::Degenerate(format!("requested t0 = {x}: {defect}")));
                }
                let sato = sato_at(opts.precision, &sd, &t0)?;
                T0Choice {
                    t0,
                    vacuum,
                    dressed,
                    sato,
                    rejected: Vec::new(),
                }
            }
        };
        let numbers = divisor_numbers(&mn, &choice.vacuum, &choice.dressed)?;
        let curve = build_curve(&mn.base)?;
        let divisors = assemble_divisors(&numbers, &curve, &choice.sato, sd.kappa())?;
        let parity = parity_check(&divisors.vacuum, &curve);
        let kp_ovals = kp_oval_check(&divisors.kp, &curve);
        Ok(Self {
            mn,
            evs,
            sd,
            choice,
            numbers,
            curve,
            divisors,
            parity,
            kp_ovals,
        })
    }

    pub fn checks(&self) -> DivisorChecks {
        let g: usize = self.curve.network.cells.iter().map(Vec::len).sum();
        let sato_on_gamma0: Vec<f64> = self
            .divisors
            .kp
            .points
            .iter()
            .filter(|p| p.component == 0)
            .map(|p| p.zeta)
            .collect();
        DivisorChecks {
            parity: self.parity.passed(),
            kp_ovals: self.kp_ovals.passed(),
            kp_degree: self.divisors.kp.degree() == g,
            sato_on_gamma0: sato_on_gamma0 == self.choice.sato.roots,
        }
    }
}
