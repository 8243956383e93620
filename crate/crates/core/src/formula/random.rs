use super::Formula;
use rand::Rng;

/// Random formulas over a fixed vocabulary.
#[derive(Clone, Debug)]
pub struct Generator<'a> {
    pub atoms: &'a [&'a str],
    pub agents: &'a [&'a str],
    pub announcements: bool,
    pub unknowability: bool,
}

impl<'a> Generator<'a> {
    /// Epistemic formulas: no announcements, no `U_i`.
    pub fn el(atoms: &'a [&'a str], agents: &'a [&'a str]) -> Self {
        Generator {
            atoms,
            agents,
            announcements: false,
            unknowability: false,
        }
    }

    pub fn pal(atoms: &'a [&'a str], agents: &'a [&'a str]) -> Self {
        Generator {
            announcements: true,
            ..Generator::el(atoms, agents)
        }
    }

    pub fn lut(atoms: &'a [&'a str], agents: &'a [&'a str]) -> Self {
        Generator {
            announcements: true,
            unknowability: true,
            ..Generator::el(atoms, agents)
        }
    }

    /// A formula of modal/connective nesting depth at most `depth`.
    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        let leaf = |rng: &mut R| {
            if rng.gen_ratio(1, 8) {
                Formula::Top
            } else {
                Formula::atom(self.atoms[rng.gen_range(0..self.atoms.len())])
            }
        };
        if depth == 0 || rng.gen_ratio(1, 4) {
            return leaf(rng);
        }
        let agent = |rng: &mut R| self.agents[rng.gen_range(0..self.agents.len())];
        let kinds = 3 + usize::from(self.announcements) + usize::from(self.unknowability);
        let mut pick = rng.gen_range(0..kinds);
        if !self.announcements && pick >= 3 {
            pick += 1;
        }
        match pick {
            0 => self.formula(rng, depth - 1).not(),
            1 => self
                .formula(rng, depth - 1)
                .and(self.formula(rng, depth - 1)),
            2 => Formula::know(agent(rng), self.formula(rng, depth - 1)),
            3 => Formula::ann(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            _ => Formula::unk(agent(rng), self.formula(rng, depth - 1)),
        }
    }
}
