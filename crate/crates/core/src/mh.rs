//! Basis-exchange Metropolis chain on hypertrees.
//!
//! Proposals pick (face in T, face not in T) uniformly among all such pairs;
//! an exchange that stays a hypertree is accepted with probability
//! min(1, (|H1(T')| / |H1(T)|)^2), otherwise the step counts as a rejection.
//! The proposal is symmetric, so the stationary distribution is the
//! torsion-squared measure.

use num::{BigRational, BigUint, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{tree_face_count, triangle_count, Complex2};
use crate::error::{Error, Result};
use crate::homology::{h1, TorsionGroup};
use crate::rng::seeded;

#[derive(Debug, Clone)]
pub struct MhState {
    pub complex: Complex2,
    pub torsion: TorsionGroup,
    pub steps: u64,
    pub accepted: u64,
}

impl MhState {
    pub fn h1_order(&self) -> BigUint {
        self.torsion.order()
    }
}

pub struct MhChain {
    state: MhState,
    faces: Vec<u32>,
    rng: ChaCha8Rng,
}

impl MhChain {
    /// Starts from `initial` (must be a hypertree) or the deterministic
    /// cone hypertree.
    pub fn new(n: u32, seed: u64, initial: Option<Complex2>) -> Result<Self> {
        let complex = match initial {
            Some(c) => {
                if c.n() != n {
                    return Err(Error::Input(format!(
                        "initial complex has n = {}, chain wants {n}",
                        c.n()
                    )));
                }
                if !c.is_2tree() {
                    return Err(Error::Contract(
                        "initial state of the chain must be a hypertree".into(),
                    ));
                }
                c
            }
            None => Complex2::cone(n)?,
        };
        let torsion = h1(&complex).torsion;
        let faces = complex.face_indices();
        Ok(MhChain {
            state: MhState {
                complex,
                torsion,
                steps: 0,
                accepted: 0,
            },
            faces,
            rng: seeded(seed),
        })
    }

    pub fn state(&self) -> &MhState {
        &self.state
    }

    pub fn into_state(self) -> MhState {
        self.state
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.state.steps == 0 {
            0.0
        } else {
            self.state.accepted as f64 / self.state.steps as f64
        }
    }

    /// One proposal; returns true iff it was accepted.
    pub fn step(&mut self) -> bool {
        let n = self.state.complex.n();
        let total = triangle_count(n);
        let r = tree_face_count(n);
        self.state.steps += 1;
        if total == r {
            // n = 3: the state space is a single hypertree
            return false;
        }
        let out_idx = self.rng.gen_range(0..r as usize);
        let removed = self.faces[out_idx];
        let absent_rank = self.rng.gen_range(0..(total - r));
        let added = {
            let mut seen = 0;
            let mut found = 0;
            for f in 0..total {
                if !self.state.complex.contains_face(f) {
                    if seen == absent_rank {
                        found = f;
                        break;
                    }
                    seen += 1;
                }
            }
            found
        };
        let candidate = self
            .state
            .complex
            .exchange_face(removed, added)
            .expect("exchange of present/absent faces");
        if !candidate.is_2tree() {
            return false;
        }
        let new_torsion = h1(&candidate).torsion;
        let new_order = new_torsion.order();
        let cur_order = self.state.torsion.order();
        let accept = if new_order >= cur_order {
            true
        } else {
            let ratio = BigRational::new(
                (&new_order * &new_order).into(),
                (&cur_order * &cur_order).into(),
            )
            .to_f64()
            .unwrap_or(0.0);
            self.rng.gen::<f64>() < ratio
        };
        if accept {
            self.faces[out_idx] = added;
            self.state.complex = candidate;
            self.state.torsion = new_torsion;
            self.state.accepted += 1;
        }
        accept
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// Runs a fresh chain for `steps` proposals and returns the final state.
pub fn mh_chain(n: u32, steps: u64, seed: u64, initial: Option<Complex2>) -> Result<MhState> {
    let mut chain = MhChain::new(n, seed, initial)?;
    chain.run(steps);
    Ok(chain.into_state())
}
