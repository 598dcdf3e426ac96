//! Indexed element lists, generators and conjugacy classes.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::groups::FiniteGroup;
use super::OracleError;

const SEED: u64 = 0x5eed_c1a5;

pub struct GroupTable<G: FiniteGroup> {
    group: G,
    elements: Vec<G::Elem>,
    index: HashMap<G::Elem, u32>,
    identity: u32,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl<G: FiniteGroup> GroupTable<G> {
    /// Enumerates `group`, checks closure and associativity on a random
    /// sample, picks generators and sweeps out the conjugacy classes.
    pub fn build(group: G) -> Result<Self, OracleError> {
        let elements = group.elements();
        let index: HashMap<G::Elem, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        if index.len() != elements.len() || elements.len() as u64 != group.order() {
            return Err(OracleError::Inconsistent(format!(
                "enumerated {} distinct of {} elements, expected {}",
                index.len(),
                elements.len(),
                group.order()
            )));
        }
        let identity = *index
            .get(&group.identity())
            .ok_or_else(|| OracleError::Inconsistent("identity not among the elements".into()))?;
        let mut table = GroupTable {
            group,
            elements,
            index,
            identity,
            inverse: Vec::new(),
            generators: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        table.check_sample(&mut rng, 200)?;
        table.inverse = (0..table.order() as u32)
            .map(|i| table.locate(&table.group.inverse(&table.elements[i as usize])))
            .collect::<Result<_, _>>()?;
        table.generators = table.find_generators(&mut rng)?;
        table.sweep_classes();
        Ok(table)
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn element(&self, i: u32) -> &G::Elem {
        &self.elements[i as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    fn locate(&self, e: &G::Elem) -> Result<u32, OracleError> {
        self.index
            .get(e)
            .copied()
            .ok_or_else(|| OracleError::Inconsistent("product left the element list".into()))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = self
            .group
            .mul(&self.elements[a as usize], &self.elements[b as usize]);
        self.index[&prod]
    }

    pub fn conjugate(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inverse(g), x), g)
    }

    pub fn element_order(&self, x: u32) -> u64 {
        let mut k = 1;
        let mut cur = x;
        while cur != self.identity {
            cur = self.mul(cur, x);
            k += 1;
        }
        k
    }

    fn check_sample(&self, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), OracleError> {
        let n = self.elements.len();
        for _ in 0..samples {
            let [a, b, c] = [0; 3].map(|_| &self.elements[rng.gen_range(0..n)]);
            let ab = self.group.mul(a, b);
            let bc = self.group.mul(b, c);
            self.locate(&ab)?;
            if self.group.mul(&ab, c) != self.group.mul(a, &bc) {
                return Err(OracleError::Inconsistent(
                    "multiplication is not associative".into(),
                ));
            }
        }
        Ok(())
    }

    fn closure_size(&self, gens: &[u32]) -> usize {
        let mut seen = vec![false; self.elements.len()];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    fn find_generators(&self, rng: &mut ChaCha8Rng) -> Result<Vec<u32>, OracleError> {
        let n = self.elements.len();
        let mut gens = Vec::new();
        let mut size = 1;
        // a random element enlarges a proper subgroup with probability >= 1/2
        for _ in 0..64 {
            if size == n {
                return Ok(gens);
            }
            let g = rng.gen_range(0..n) as u32;
            gens.push(g);
            let new_size = self.closure_size(&gens);
            if new_size == size {
                gens.pop();
            }
            size = new_size;
        }
        if size == n {
            Ok(gens)
        } else {
            Err(OracleError::Inconsistent(
                "random generators did not generate".into(),
            ))
        }
    }

    fn sweep_classes(&mut self) {
        const UNSET: u32 = u32::MAX;
        let n = self.elements.len();
        let mut class_of = vec![UNSET; n];
        let mut classes = Vec::new();
        for start in 0..n as u32 {
            if class_of[start as usize] != UNSET {
                continue;
            }
            let id = classes.len() as u32;
            class_of[start as usize] = id;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &g in &self.generators {
                    let y = self.conjugate(x, g);
                    if class_of[y as usize] == UNSET {
                        class_of[y as usize] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Classes ordered by their smallest element index.
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.len() as u64).collect()
    }

    /// Checks on `samples` random pairs that `h^-1 g h` lies in the class of `g`.
    pub fn spot_check_classes(&self, seed: u64, samples: usize) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.elements.len();
        (0..samples).all(|_| {
            let g = rng.gen_range(0..n) as u32;
            let h = rng.gen_range(0..n) as u32;
            self.class_of(self.conjugate(g, h)) == self.class_of(g)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::groups::{ElementaryAbelian, MatrixGroup, MatrixShape};

    #[test]
    fn class_counts() {
        let gl22 = GroupTable::build(MatrixGroup::new(MatrixShape::General, 2, 2)).unwrap();
        assert_eq!(gl22.class_count(), 3);
        let gl32 = GroupTable::build(MatrixGroup::new(MatrixShape::General, 3, 2)).unwrap();
        assert_eq!(gl32.class_count(), 6);
        let gl23 = GroupTable::build(MatrixGroup::new(MatrixShape::General, 2, 3)).unwrap();
        assert_eq!(gl23.class_count(), 8);
        let t3 = GroupTable::build(MatrixGroup::new(MatrixShape::TwoFixed, 3, 2)).unwrap();
        assert_eq!(t3.class_count(), 5);
        let ab = GroupTable::build(ElementaryAbelian::new(2, 3)).unwrap();
        assert_eq!(ab.class_count(), 8);
    }

    #[test]
    fn class_invariants() {
        let t = GroupTable::build(MatrixGroup::new(MatrixShape::TwoFixed, 4, 2)).unwrap();
        let sizes = t.class_sizes();
        assert_eq!(sizes.iter().sum::<u64>(), t.order());
        assert!(sizes.iter().all(|s| t.order() % s == 0));
        assert!(t.spot_check_classes(1, 100));
        let firsts: Vec<u32> = t.classes().iter().map(|c| c[0]).collect();
        assert!(firsts.windows(2).all(|w| w[0] < w[1]));
    }
}
