use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::estimators::unit_ball_volume;
use crate::geometry::{CubeWindow, PointPattern};
use crate::gibbs::energy::interaction_delta;
use crate::gibbs::free_process::{Acceptance, Domain, FreeProcess};
use crate::gibbs::model::GibbsModel;
use crate::rng::RngSeed;

/// Default cap on free-process events drawn per sample.
pub const DEFAULT_EVENT_BUDGET: u64 = 100_000_000;
/// Target for `|D| tau lambda^k` when choosing the default margin.
pub const DEFAULT_PADDING_TOLERANCE: f64 = 1e-4;

/// Margin `m` of the simulation domain `D = W ⊕ B_m` around the window.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Padding {
    /// Smallest `2k r` with `|D| tau lambda^k` below [`DEFAULT_PADDING_TOLERANCE`].
    #[default]
    Default,
    Margin(f64),
    /// No restriction: the infinite-volume process seen through the window.
    Infinite,
}

/// Bookkeeping for one perfect sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThinningSummary {
    /// Free-process points alive at time 0 in the window.
    pub roots: usize,
    pub accepted: usize,
    /// Size of the union of the roots' ancestor clans (roots included).
    pub clan_events: usize,
    pub generated_events: u64,
    /// Deepest ancestor generation reached.
    pub max_generation: usize,
}

#[derive(Debug, Clone)]
pub struct PerfectSampler {
    window: CubeWindow,
    model: GibbsModel,
    margin: f64,
    budget: u64,
}

impl PerfectSampler {
    pub fn new(window: CubeWindow, model: GibbsModel) -> Result<Self> {
        if window.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: window.dim(),
            });
        }
        let margin = default_padding(&window, &model);
        Ok(Self {
            window,
            model,
            margin,
            budget: DEFAULT_EVENT_BUDGET,
        })
    }

    pub fn with_padding(mut self, padding: Padding) -> Result<Self> {
        self.margin = match padding {
            Padding::Default => default_padding(&self.window, &self.model),
            Padding::Margin(m) if m >= 0.0 && m.is_finite() => m,
            Padding::Margin(m) => {
                return Err(Error::InvalidParameter(format!(
                    "padding margin must be finite and >= 0, got {m}"
                )))
            }
            Padding::Infinite => f64::INFINITY,
        };
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn model(&self) -> &GibbsModel {
        &self.model
    }

    pub fn window(&self) -> &CubeWindow {
        &self.window
    }

    pub fn sample(&self, seed: RngSeed) -> Result<(PointPattern, ThinningSummary)> {
        let d = self.window.dim();
        let r = self.model.range();
        let half = self.window.half_side();
        let domain = Domain {
            half,
            pad: self.margin,
        };
        let mut fp = FreeProcess::new(d, self.model.tau(), r, domain, seed, self.budget);
        let window = &self.window;
        let roots = fp.alive_at_zero_in(half, |p| window.contains(p))?;

        // Breadth-first closure of the ancestor relation.
        let mut slot: HashMap<usize, usize> = HashMap::new();
        let mut members: Vec<usize> = Vec::new();
        let mut generation: Vec<usize> = Vec::new();
        for &i in &roots {
            if slot.insert(i, members.len()).is_none() {
                members.push(i);
                generation.push(0);
            }
        }
        let mut ancestors: Vec<Vec<usize>> = Vec::new();
        let mut buf = Vec::new();
        let mut cursor = 0;
        while cursor < members.len() {
            let i = members[cursor];
            let ev = *fp.event(i);
            fp.alive_near(&ev.location[..d], ev.birth_time, r, Some(i), &mut buf)?;
            let next = generation[cursor] + 1;
            let mut mine = Vec::with_capacity(buf.len());
            for &j in &buf {
                let s = *slot.entry(j).or_insert_with(|| {
                    members.push(j);
                    generation.push(next);
                    members.len() - 1
                });
                mine.push(s);
            }
            ancestors.push(mine);
            cursor += 1;
        }

        // Forward thinning in birth order; ancestors are always born earlier.
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| {
            fp.event(members[a])
                .birth_time
                .total_cmp(&fp.event(members[b]).birth_time)
        });
        let mut state = vec![Acceptance::Pending; members.len()];
        let mut near: Vec<&[f64]> = Vec::new();
        for &s in &order {
            near.clear();
            for &a in &ancestors[s] {
                debug_assert_ne!(state[a], Acceptance::Pending);
                if state[a] == Acceptance::Accepted {
                    near.push(fp.location(members[a]));
                }
            }
            let ev = fp.event(members[s]);
            let delta = interaction_delta(self.model.interaction(), &ev.location[..d], &near);
            state[s] = if ev.mark < self.model.acceptance(delta) {
                Acceptance::Accepted
            } else {
                Acceptance::Rejected
            };
        }
        for (s, &i) in members.iter().enumerate() {
            fp.event_mut(i).acceptance = state[s];
        }

        let mut coords = Vec::new();
        let mut accepted = 0;
        for &i in &roots {
            if fp.event(i).acceptance == Acceptance::Accepted {
                coords.extend_from_slice(fp.location(i));
                accepted += 1;
            }
        }
        let summary = ThinningSummary {
            roots: roots.len(),
            accepted,
            clan_events: members.len(),
            generated_events: fp.generated(),
            max_generation: generation.iter().copied().max().unwrap_or(0),
        };
        Ok((PointPattern::new(self.window, coords)?, summary))
    }
}

/// Perfect sample of `model` seen through `window`, with the default margin
/// and event budget.
pub fn sample_gibbs_perfect(
    window: CubeWindow,
    model: GibbsModel,
    seed: RngSeed,
) -> Result<(PointPattern, ThinningSummary)> {
    PerfectSampler::new(window, model)?.sample(seed)
}

/// Volume of the cube of side `side` dilated by a ball of radius `m`.
pub(crate) fn dilated_cube_volume(dim: usize, side: f64, m: f64) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=dim {
        total += binom * side.powi((dim - j) as i32) * unit_ball_volume(j) * m.powi(j as i32);
        binom = binom * (dim - j) as f64 / (j + 1) as f64;
    }
    total
}

/// Smallest margin `2k r` such that `|W ⊕ B_{2kr}| tau lambda^k` is below
/// [`DEFAULT_PADDING_TOLERANCE`].
pub fn default_padding(window: &CubeWindow, model: &GibbsModel) -> f64 {
    let r = model.range();
    let lambda = model.branching_mean();
    let mut k = 0u32;
    loop {
        let m = 2.0 * k as f64 * r;
        let v = dilated_cube_volume(window.dim(), window.side(), m);
        if v * model.tau() * lambda.powi(k as i32) < DEFAULT_PADDING_TOLERANCE || k >= 10_000 {
            return m;
        }
        k += 1;
    }
}
