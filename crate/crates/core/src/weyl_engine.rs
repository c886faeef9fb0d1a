//! Breadth-first enumeration of affine Weyl group elements by length.
//!
//! Elements are exact integer affine maps, so equality is coordinate
//! equality. Right multiplication by a generator moves one step in the Cayley
//! graph, and BFS depth equals Coxeter length.

use std::collections::{HashMap, HashSet};
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::affine_map::AffineMap;
use crate::cartan_data::{AffineCoxeterSystem, CartanType};

/// Default bound on the number of stored elements.
pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("element cap of {cap} exceeded; lengths up to {completed_radius} were completed")]
    CapExceeded {
        cap: usize,
        completed_radius: u32,
        partial: Box<Ball>,
    },
    #[error("word of length {word_len} evaluates outside the enumerated ball of radius {radius}")]
    OutsideBall { word_len: usize, radius: u32 },
    #[error("letter {letter} is not a generator index (system has {generators} generators)")]
    BadLetter { letter: usize, generators: usize },
    #[error("word {word:?} is not reduced")]
    NotReduced { word: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    map: AffineMap,
    length: u32,
    multilength: Vec<u32>,
    geodesic: Vec<usize>,
}

impl GroupElement {
    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Number of letters from each generator class in a reduced word.
    pub fn multilength(&self) -> &[u32] {
        &self.multilength
    }

    /// A reduced word, read left to right as `s_{i1} s_{i2} ...`.
    pub fn geodesic(&self) -> &[usize] {
        &self.geodesic
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

/// All elements of length at most `radius`, in canonical order
/// (length, then lexicographic matrix entries).
#[derive(Debug, Clone)]
pub struct Ball {
    cartan_type: CartanType,
    class_count: usize,
    generator_count: usize,
    radius: u32,
    elements: Vec<GroupElement>,
    layer_starts: Vec<usize>,
    index: HashMap<AffineMap, usize>,
}

impl Ball {
    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Elements of exactly length `k`.
    pub fn layer(&self, k: u32) -> &[GroupElement] {
        let k = k as usize;
        if k >= self.layer_starts.len() {
            return &[];
        }
        let end = self
            .layer_starts
            .get(k + 1)
            .copied()
            .unwrap_or(self.elements.len());
        &self.elements[self.layer_starts[k]..end]
    }

    pub fn counts_by_length(&self) -> Vec<usize> {
        (0..=self.radius).map(|k| self.layer(k).len()).collect()
    }

    pub fn lookup(&self, map: &AffineMap) -> Option<&GroupElement> {
        self.index.get(map).map(|&i| &self.elements[i])
    }

    fn check_letters(&self, word: &[usize]) -> Result<(), EngineError> {
        match word.iter().find(|&&s| s >= self.generator_count) {
            Some(&letter) => Err(EngineError::BadLetter {
                letter,
                generators: self.generator_count,
            }),
            None => Ok(()),
        }
    }

    /// Coxeter length of the element a word evaluates to.
    pub fn length_of_word(
        &self,
        system: &AffineCoxeterSystem,
        word: &[usize],
    ) -> Result<u32, EngineError> {
        self.check_letters(word)?;
        let map = system.evaluate_word(word);
        self.lookup(&map)
            .map(|e| e.length)
            .ok_or(EngineError::OutsideBall {
                word_len: word.len(),
                radius: self.radius,
            })
    }

    pub fn is_reduced(
        &self,
        system: &AffineCoxeterSystem,
        word: &[usize],
    ) -> Result<bool, EngineError> {
        Ok(self.length_of_word(system, word)? as usize == word.len())
    }

    /// Counts letters per generator class; rejects non-reduced words.
    pub fn multilength_of_word(
        &self,
        system: &AffineCoxeterSystem,
        word: &[usize],
    ) -> Result<Vec<u32>, EngineError> {
        if !self.is_reduced(system, word)? {
            return Err(EngineError::NotReduced {
                word: word.to_vec(),
            });
        }
        Ok(class_counts(system, word))
    }

    /// Streams the ball as JSON lines, one element per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.elements {
            let record = ElementRecord {
                length: e.length,
                multilength: &e.multilength,
                geodesic: &e.geodesic,
                matrix: e.map.linear_rows(),
                translation: e.map.translation(),
            };
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ElementRecord<'a> {
    length: u32,
    multilength: &'a [u32],
    geodesic: &'a [usize],
    matrix: Vec<Vec<i64>>,
    translation: &'a [i64],
}

fn class_counts(system: &AffineCoxeterSystem, word: &[usize]) -> Vec<u32> {
    let mut counts = vec![0; system.class_count()];
    for &s in word {
        counts[system.class_of(s)] += 1;
    }
    counts
}

/// Enumerates every element of length at most `radius`, with the default cap.
pub fn enumerate_ball(system: &AffineCoxeterSystem, radius: u32) -> Result<Ball, EngineError> {
    enumerate_ball_capped(system, radius, DEFAULT_ELEMENT_CAP)
}

pub fn enumerate_ball_capped(
    system: &AffineCoxeterSystem,
    radius: u32,
    cap: usize,
) -> Result<Ball, EngineError> {
    let identity = GroupElement {
        map: AffineMap::identity(system.dim()),
        length: 0,
        multilength: vec![0; system.class_count()],
        geodesic: Vec::new(),
    };
    let mut ball = Ball {
        cartan_type: system.cartan_type(),
        class_count: system.class_count(),
        generator_count: system.generator_count(),
        radius: 0,
        elements: Vec::new(),
        layer_starts: vec![0],
        index: HashMap::new(),
    };
    ball.index.insert(identity.map.clone(), 0);
    ball.elements.push(identity);

    for k in 1..=radius {
        let prev = ball.layer_starts[k as usize - 1];
        let prev_end = ball.elements.len();
        let mut layer: Vec<GroupElement> = Vec::new();
        let mut seen: HashSet<AffineMap> = HashSet::new();
        for i in prev..prev_end {
            for (s, g) in system.generators().iter().enumerate() {
                let w = &ball.elements[i];
                let map = w.map.compose(g);
                if ball.index.contains_key(&map) || !seen.insert(map.clone()) {
                    continue;
                }
                let mut geodesic = w.geodesic.clone();
                geodesic.push(s);
                let mut multilength = w.multilength.clone();
                multilength[system.class_of(s)] += 1;
                layer.push(GroupElement {
                    map,
                    length: k,
                    multilength,
                    geodesic,
                });
            }
        }
        if ball.elements.len() + layer.len() > cap {
            return Err(EngineError::CapExceeded {
                cap,
                completed_radius: k - 1,
                partial: Box::new(ball),
            });
        }
        layer.sort_by(|a, b| a.map.cmp(&b.map));
        ball.layer_starts.push(ball.elements.len());
        for e in layer {
            ball.index.insert(e.map.clone(), ball.elements.len());
            ball.elements.push(e);
        }
        ball.radius = k;
    }
    Ok(ball)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan_data::build_affine_system;
    use std::collections::HashMap;

    fn system(t: &str) -> AffineCoxeterSystem {
        build_affine_system(t.parse().unwrap())
    }

    /// Every word of length <= max_len, grouped by the element it evaluates to.
    fn words_by_element(
        sys: &AffineCoxeterSystem,
        max_len: usize,
    ) -> HashMap<AffineMap, Vec<Vec<usize>>> {
        let mut out: HashMap<AffineMap, Vec<Vec<usize>>> = HashMap::new();
        let mut layer = vec![(Vec::new(), AffineMap::identity(sys.dim()))];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (w, m) in layer {
                if len < max_len {
                    for s in 0..sys.generator_count() {
                        let mut w2 = w.clone();
                        w2.push(s);
                        next.push((w2, m.compose(sys.generator(s))));
                    }
                }
                out.entry(m).or_default().push(w);
            }
            layer = next;
        }
        out
    }

    #[test]
    fn infinite_dihedral_counts() {
        let ball = enumerate_ball(&system("A1"), 3).unwrap();
        assert_eq!(ball.counts_by_length(), vec![1, 2, 2, 2]);
        assert_eq!(ball.len(), 7);
    }

    #[test]
    fn a2_counts() {
        let ball = enumerate_ball(&system("A2"), 2).unwrap();
        assert_eq!(ball.counts_by_length(), vec![1, 3, 6]);
        assert_eq!(ball.len(), 10);
    }

    #[test]
    fn radius_zero_is_identity_only() {
        for t in ["A1", "G2", "E8"] {
            let ball = enumerate_ball(&system(t), 0).unwrap();
            assert_eq!(ball.len(), 1);
            assert!(ball.elements()[0].is_identity());
            assert!(ball.elements()[0].map().is_identity());
        }
    }

    #[test]
    fn element_invariants() {
        for t in ["A1", "A2", "C2", "G2", "B3"] {
            let sys = system(t);
            let ball = enumerate_ball(&sys, 6).unwrap();
            for e in ball.elements() {
                assert_eq!(e.multilength().iter().sum::<u32>(), e.length());
                assert_eq!(e.geodesic().len() as u32, e.length());
                assert_eq!(&sys.evaluate_word(e.geodesic()), e.map());
                assert_eq!(e.is_identity(), e.map().is_identity());
            }
            // Every element of length k >= 1 is adjacent to a shorter one.
            for e in ball.elements().iter().filter(|e| e.length() > 0) {
                let has_parent = (0..sys.generator_count()).any(|s| {
                    let m = e.map().compose(sys.generator(s));
                    ball.lookup(&m).map(|p| p.length()) == Some(e.length() - 1)
                });
                assert!(has_parent);
            }
        }
    }

    #[test]
    fn bfs_length_is_minimal_word_length() {
        for t in ["A1", "A2", "C2", "G2"] {
            let sys = system(t);
            let ball = enumerate_ball(&sys, 6).unwrap();
            let words = words_by_element(&sys, 6);
            for (map, ws) in &words {
                let min = ws.iter().map(|w| w.len()).min().unwrap() as u32;
                if let Some(e) = ball.lookup(map) {
                    assert_eq!(e.length(), min, "{t}");
                } else {
                    assert!(min > 6);
                }
            }
            for e in ball.elements() {
                assert!(words.contains_key(e.map()));
            }
        }
    }

    #[test]
    fn multilength_does_not_depend_on_reduced_word() {
        for t in ["G2", "C2", "B3"] {
            let sys = system(t);
            let ball = enumerate_ball(&sys, 6).unwrap();
            let limit = if t == "B3" { 5 } else { 6 };
            for (map, ws) in words_by_element(&sys, limit) {
                let min = ws.iter().map(|w| w.len()).min().unwrap();
                let e = ball.lookup(&map).unwrap();
                for w in ws.iter().filter(|w| w.len() == min) {
                    assert_eq!(ball.multilength_of_word(&sys, w).unwrap(), e.multilength());
                }
            }
        }
    }

    #[test]
    fn word_checks() {
        let sys = system("A1");
        let ball = enumerate_ball(&sys, 6).unwrap();
        assert!(!ball.is_reduced(&sys, &[0, 0]).unwrap());
        assert!(ball.is_reduced(&sys, &[0]).unwrap());
        assert!(ball.is_reduced(&sys, &[0, 1, 0, 1, 0]).unwrap());
        assert_eq!(ball.multilength_of_word(&sys, &[]).unwrap(), vec![0, 0]);
        assert!(matches!(
            ball.multilength_of_word(&sys, &[1, 1]),
            Err(EngineError::NotReduced { .. })
        ));
        assert!(matches!(
            ball.is_reduced(&sys, &[0, 1, 0, 1, 0, 1, 0]),
            Err(EngineError::OutsideBall { .. })
        ));
        assert!(matches!(
            ball.is_reduced(&sys, &[2]),
            Err(EngineError::BadLetter { .. })
        ));

        let g2 = system("G2");
        let ball = enumerate_ball(&g2, 3).unwrap();
        assert_eq!(ball.multilength_of_word(&g2, &[0, 2]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn cap_is_an_error_with_partial_result() {
        let sys = system("A2");
        match enumerate_ball_capped(&sys, 5, 12) {
            Err(EngineError::CapExceeded {
                cap,
                completed_radius,
                partial,
            }) => {
                assert_eq!(cap, 12);
                assert_eq!(completed_radius, 2);
                assert_eq!(partial.counts_by_length(), vec![1, 3, 6]);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let sys = system("C3");
        let a = enumerate_ball(&sys, 5).unwrap();
        let b = enumerate_ball(&sys, 5).unwrap();
        assert_eq!(a.elements(), b.elements());
        for k in 1..=5 {
            let layer = a.layer(k);
            assert!(layer.windows(2).all(|w| w[0].map() < w[1].map()));
        }
    }

    #[test]
    fn jsonl_export() {
        let sys = system("A1");
        let ball = enumerate_ball(&sys, 1).unwrap();
        let mut buf = Vec::new();
        ball.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            r#"{"length":0,"multilength":[0,0],"geodesic":[],"matrix":[[1]],"translation":[0]}"#
        );
        let v: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(v["length"], 1);
    }
}
