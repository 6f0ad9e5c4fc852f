//! Exact rational angles under doubling, the critical partition, rotation
//! cycles at the α-fixed point and itineraries of angles on principal veins.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{is_realizable_combinatorial, FullWord, SimplifiedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("cannot parse angle {0:?}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid rotation number {p}/{q}")]
    InvalidRotation { p: u32, q: u32 },
    #[error("angle {0} is not strictly periodic")]
    NotPeriodic(Angle),
    #[error("orbit point {point} of {theta} is a rotation-cycle angle")]
    OnPartitionBoundary { theta: Angle, point: Angle },
    #[error("angle {theta} is not on the {p}/{q} vein: {reason}")]
    NotOnVein {
        theta: Angle,
        p: u32,
        q: u32,
        reason: String,
    },
}

/// `numerator / denominator` mod 1, always reduced with
/// `0 <= numerator < denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub fn new(num: u64, den: u64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::ZeroDenominator);
        }
        let num = num % den;
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `2θ mod 1`.
    pub fn double(&self) -> Self {
        let n = (2 * self.num as u128 % self.den as u128) as u64;
        Self::new(n, self.den).unwrap()
    }

    /// `θ/2` (the preimage in `[0, 1/2)`).
    pub fn half(&self) -> Self {
        Self::new(self.num, 2 * self.den).unwrap()
    }

    /// `(θ + 1)/2` (the preimage in `[1/2, 1)`).
    pub fn half_plus(&self) -> Self {
        Self::new(self.num + self.den, 2 * self.den).unwrap()
    }

    /// Midpoint of the counterclockwise arc from `self` to `other`.
    pub fn arc_midpoint(&self, other: &Angle) -> Self {
        let (a, b) = (self.num as u128, self.den as u128);
        let (c, d) = (other.num as u128, other.den as u128);
        // a/b + ((c/d - a/b) mod 1) / 2 over the common denominator 2bd.
        let lcm = b * d;
        let x = a * d;
        let mut y = c * b;
        if y <= x {
            y += lcm;
        }
        let num = x + y;
        let den = 2 * lcm;
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Self::new(
            u64::try_from(num % den).expect("angle numerator overflow"),
            u64::try_from(den).expect("angle denominator overflow"),
        )
        .unwrap()
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Angle {
    type Err = AngleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AngleError::Parse(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        Self::new(n, d)
    }
}

impl TryFrom<String> for Angle {
    type Error = AngleError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Angle> for String {
    fn from(a: Angle) -> Self {
        a.to_string()
    }
}

/// Half-open counterclockwise arc `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
}

impl Arc {
    pub fn contains(&self, x: &Angle) -> bool {
        if self.start < self.end {
            self.start <= *x && *x < self.end
        } else {
            *x >= self.start || *x < self.end
        }
    }

    /// Strictly inside, endpoints excluded.
    pub fn contains_interior(&self, x: &Angle) -> bool {
        self.contains(x) && *x != self.start
    }
}

/// The two halves `[θ/2, (θ+1)/2)` and `[(θ+1)/2, θ/2)` cut by the
/// preimages of `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnglePartition {
    pub theta: Angle,
    pub halves: [Arc; 2],
}

impl AnglePartition {
    pub fn new(theta: Angle) -> Self {
        let (a, b) = (theta.half(), theta.half_plus());
        Self {
            theta,
            halves: [Arc { start: a, end: b }, Arc { start: b, end: a }],
        }
    }

    /// Index of the half containing `x` (half-open arcs).
    pub fn half_of(&self, x: &Angle) -> usize {
        usize::from(!self.halves[0].contains(x))
    }

    /// `x` is one of the two cut points.
    pub fn on_boundary(&self, x: &Angle) -> bool {
        *x == self.halves[0].start || *x == self.halves[1].start
    }

    /// `x` and `y` lie in the interiors of different halves.
    pub fn separates(&self, x: &Angle, y: &Angle) -> bool {
        !self.on_boundary(x) && !self.on_boundary(y) && self.half_of(x) != self.half_of(y)
    }
}

/// Minimal preperiod and period under doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub preperiod: u32,
    pub period: u64,
}

pub fn classify(theta: &Angle) -> Classification {
    let den = theta.den;
    let preperiod = den.trailing_zeros();
    let odd = den >> preperiod;
    let period = if odd == 1 {
        1
    } else {
        let mut x = 2 % odd as u128;
        let mut k = 1;
        while x != 1 {
            x = x * 2 % odd as u128;
            k += 1;
        }
        k
    };
    Classification { preperiod, period }
}

/// `θ, 2θ, 4θ, ...` (`n` terms).
pub fn orbit(theta: &Angle, n: usize) -> Vec<Angle> {
    let mut out = Vec::with_capacity(n);
    let mut x = *theta;
    for _ in 0..n {
        out.push(x);
        x = x.double();
    }
    out
}

/// The `q` angles of the cycle landing at the α-fixed point of the `p/q`
/// limb.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationCycle {
    pub p: u32,
    pub q: u32,
    /// Sorted increasingly.
    pub angles: Vec<Angle>,
}

/// Search the period-`q` doubling cycles (denominator `2^q - 1`) for the one
/// on which doubling advances the circular order by `p` places.
pub fn rotation_cycle(p: u32, q: u32) -> Result<RotationCycle, AngleError> {
    if !(0 < p && p < q && p.gcd(&q) == 1 && q < 40) {
        return Err(AngleError::InvalidRotation { p, q });
    }
    let den = (1u64 << q) - 1;
    for k in 1..den {
        let a = Angle::new(k, den).unwrap();
        if classify(&a).period != q as u64 {
            continue;
        }
        let mut cyc = orbit(&a, q as usize);
        if cyc.iter().any(|x| *x < a) {
            continue; // visit each cycle once, from its smallest angle
        }
        cyc.sort();
        let ok = (0..q as usize).all(|i| cyc[i].double() == cyc[(i + p as usize) % q as usize]);
        if ok {
            return Ok(RotationCycle { p, q, angles: cyc });
        }
    }
    Err(AngleError::InvalidRotation { p, q })
}

/// Full and simplified itineraries of a periodic angle on the `p/q` vein.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleItineraries {
    pub full: FullWord,
    pub simplified: SimplifiedWord,
}

/// Itineraries of the orbit of `θ` through the partition of the circle by
/// the rotation cycle and the two preimages of `θ`.
///
/// The sector between consecutive cycle angles that contains 0 is cut by
/// the preimages of `θ` into symbol 0 (the part containing 0) and symbol 1;
/// the other sectors get symbols `2..q`, with the sector of `θ` labeled 2
/// and doubling raising labels by one. The last orbit point sits on a
/// preimage of `θ`; its symbol is the one that makes the binary word the
/// itinerary of a real center.
pub fn angle_to_itineraries(theta: &Angle, p: u32, q: u32) -> Result<AngleItineraries, AngleError> {
    itineraries_with_cycle(theta, &rotation_cycle(p, q)?)
}

fn itineraries_with_cycle(
    theta: &Angle,
    cycle: &RotationCycle,
) -> Result<AngleItineraries, AngleError> {
    let (p, q) = (cycle.p, cycle.q);
    let cls = classify(theta);
    if cls.preperiod != 0 || theta.num == 0 {
        return Err(AngleError::NotPeriodic(*theta));
    }
    let not_on_vein = |reason: &str| AngleError::NotOnVein {
        theta: *theta,
        p,
        q,
        reason: reason.to_string(),
    };
    let a = &cycle.angles;
    let qn = q as usize;
    // Sector i is [a_i, a_{i+1}); sector q-1 wraps through 0.
    let sectors: Vec<Arc> = (0..qn)
        .map(|i| Arc {
            start: a[i],
            end: a[(i + 1) % qn],
        })
        .collect();
    let sector_of = |x: &Angle| sectors.iter().position(|s| s.contains(x)).unwrap();
    let critical = qn - 1;

    let mut label = vec![0u8; qn];
    let mut s = sector_of(theta);
    if s == critical {
        return Err(not_on_vein(
            "angle lies in the sector of the critical point",
        ));
    }
    for k in 2..=q as u8 {
        if s == critical || label[s] != 0 {
            return Err(not_on_vein("sector labels are inconsistent"));
        }
        label[s] = k;
        let mid = sectors[s].start.arc_midpoint(&sectors[s].end);
        s = sector_of(&mid.double());
    }
    if s != critical {
        return Err(not_on_vein("sector labels are inconsistent"));
    }

    let n = cls.period as usize;
    let partition = AnglePartition::new(*theta);
    let pts = orbit(theta, n);
    let mut symbols = Vec::with_capacity(n);
    for x in &pts[..n - 1] {
        if a.contains(x) {
            return Err(AngleError::OnPartitionBoundary {
                theta: *theta,
                point: *x,
            });
        }
        let sx = sector_of(x);
        symbols.push(if sx == critical {
            // Half 1 is [(θ+1)/2, θ/2), the one containing 0.
            if partition.half_of(x) == 1 {
                0
            } else {
                1
            }
        } else {
            label[sx]
        });
    }
    if a.contains(&pts[n - 1]) {
        return Err(AngleError::OnPartitionBoundary {
            theta: *theta,
            point: pts[n - 1],
        });
    }

    let prefix = FullWord::new(symbols.clone(), q as u8).simplify();
    let binary_prefix: Vec<u8> = prefix.symbols().iter().map(|&s| s.min(1)).collect();
    let mut choices = [0u8, 1].into_iter().filter(|&d| {
        let mut w = binary_prefix.clone();
        w.push(d);
        is_realizable_combinatorial(&w)
    });
    let last = match (choices.next(), choices.next()) {
        (Some(d), None) => d,
        _ => return Err(not_on_vein("no unique realizable completion")),
    };
    let mut binary = binary_prefix;
    binary.push(last);
    let simplified = SimplifiedWord(crate::words::recode_symbols(&binary));
    if simplified.symbols()[..prefix.len()] != *prefix.symbols() {
        return Err(not_on_vein("itinerary is not a recoded kneading word"));
    }
    symbols.push(*simplified.symbols().last().unwrap());
    let full = FullWord::new(symbols, q as u8);
    if !full.satisfies_grammar() {
        return Err(not_on_vein("itinerary violates the vein grammar"));
    }
    Ok(AngleItineraries { full, simplified })
}

/// The shortest arc between consecutive rotation-cycle angles: the
/// characteristic arc that contains every angle of the limb.
pub fn characteristic_arc(cycle: &RotationCycle) -> Arc {
    let n = cycle.angles.len();
    let den = (1u64 << cycle.q) - 1;
    // Cycle angles have denominators dividing 2^q - 1.
    let scaled = |a: &Angle| a.num * (den / a.den);
    let gap =
        |i: usize| (scaled(&cycle.angles[(i + 1) % n]) + den - scaled(&cycle.angles[i])) % den;
    let i = (0..n).min_by_key(|&i| gap(i)).unwrap();
    Arc {
        start: cycle.angles[i],
        end: cycle.angles[(i + 1) % n],
    }
}

/// Every angle of exact period `period` in the closed characteristic arc of
/// the `p/q` limb whose itineraries are valid vein itineraries, in
/// increasing order.
pub fn vein_angles_of_period(
    p: u32,
    q: u32,
    period: u32,
) -> Result<Vec<(Angle, AngleItineraries)>, AngleError> {
    assert!((1..64).contains(&period), "period out of range");
    let cycle = rotation_cycle(p, q)?;
    let arc = characteristic_arc(&cycle);
    let den = (1u64 << period) - 1;
    let lo = (arc.start.num as u128 * den as u128).div_ceil(arc.start.den as u128) as u64;
    let hi = (arc.end.num as u128 * den as u128 / arc.end.den as u128) as u64;
    let mut found: Vec<(Angle, AngleItineraries)> = (lo..=hi)
        .into_par_iter()
        .filter_map(|k| {
            let theta = Angle::new(k, den).unwrap();
            if !arc.contains_interior(&theta) || classify(&theta).period != period as u64 {
                return None;
            }
            itineraries_with_cycle(&theta, &cycle)
                .ok()
                .map(|it| (theta, it))
        })
        .collect();
    // The arc endpoints land at the root of the limb, whose orbit lies on
    // the partition; they carry the itinerary of the vein root.
    if period == q {
        let simplified = SimplifiedWord(vec![2, 0]);
        let full = crate::words::q_recode(&simplified, q as u8);
        for theta in [arc.start, arc.end] {
            let it = AngleItineraries {
                full: full.clone(),
                simplified: simplified.clone(),
            };
            found.push((theta, it));
        }
        found.sort_by_key(|a| a.0);
    }
    Ok(found)
}

/// Angles on the `p/q` vein whose simplified itinerary is `w`.
pub fn angles_for_itinerary(w: &SimplifiedWord, p: u32, q: u32) -> Result<Vec<Angle>, AngleError> {
    let full_period = w.len() + (q as usize - 2) * w.symbols().iter().filter(|&&s| s == 2).count();
    let found = vein_angles_of_period(p, q, full_period as u32)?;
    Ok(found
        .into_iter()
        .filter(|(_, it)| it.simplified == *w)
        .map(|(a, _)| a)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn parse_reduce_print() {
        assert_eq!(ang("2/10").to_string(), "1/5");
        assert_eq!(ang("5/5"), Angle::zero());
        assert!("1/0".parse::<Angle>().is_err());
        assert!("x/3".parse::<Angle>().is_err());
        assert!(ang("1/3") < ang("1/2"));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(&ang("1/5")),
            Classification {
                preperiod: 0,
                period: 4
            }
        );
        assert_eq!(
            classify(&ang("1/4")),
            Classification {
                preperiod: 2,
                period: 1
            }
        );
        assert_eq!(
            classify(&ang("1/9")),
            Classification {
                preperiod: 0,
                period: 6
            }
        );
        assert_eq!(
            classify(&ang("0")),
            Classification {
                preperiod: 0,
                period: 1
            }
        );
    }

    #[test]
    fn orbits() {
        let o: Vec<String> = orbit(&ang("1/5"), 4)
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(o, ["1/5", "2/5", "4/5", "3/5"]);
        assert_eq!(orbit(&Angle::zero(), 3), vec![Angle::zero(); 3]);
        let o: Vec<String> = orbit(&ang("1/9"), 6)
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(o, ["1/9", "2/9", "4/9", "8/9", "7/9", "5/9"]);
    }

    #[test]
    fn rotation_cycles() {
        let s = |p, q| -> Vec<String> {
            rotation_cycle(p, q)
                .unwrap()
                .angles
                .iter()
                .map(|a| a.to_string())
                .collect()
        };
        assert_eq!(s(1, 2), ["1/3", "2/3"]);
        assert_eq!(s(1, 3), ["1/7", "2/7", "4/7"]);
        assert_eq!(s(2, 3), ["3/7", "5/7", "6/7"]);
        assert_eq!(rotation_cycle(1, 5).unwrap().angles.len(), 5);
        assert!(rotation_cycle(2, 4).is_err());
        assert!(rotation_cycle(3, 3).is_err());
    }

    #[test]
    fn partition_and_midpoints() {
        let part = AnglePartition::new(ang("1/5"));
        assert_eq!(part.halves[0].start, ang("1/10"));
        assert_eq!(part.halves[0].end, ang("3/5"));
        assert_eq!(part.half_of(&Angle::zero()), 1);
        assert!(part.on_boundary(&ang("3/5")));
        assert_eq!(ang("3/4").arc_midpoint(&ang("1/4")), Angle::zero());
        assert_eq!(ang("1/4").arc_midpoint(&ang("3/4")), ang("1/2"));
    }

    #[test]
    fn real_vein_itinerary() {
        let it = angle_to_itineraries(&ang("13/31"), 1, 2).unwrap();
        assert_eq!(it.simplified.to_string(), "20121");
        assert_eq!(it.full.to_string(), "20121");
        assert!(matches!(
            angle_to_itineraries(&ang("1/3"), 1, 2),
            Err(AngleError::OnPartitionBoundary { .. })
        ));
    }

    #[test]
    fn one_fifth_on_rabbit_vein() {
        let it = angle_to_itineraries(&ang("1/5"), 1, 3).unwrap();
        assert_eq!(it.full.to_string(), "2301");
        assert_eq!(it.simplified.to_string(), "201");
    }

    #[test]
    fn outside_limb_is_rejected() {
        assert!(matches!(
            angle_to_itineraries(&ang("1/31"), 1, 3),
            Err(AngleError::NotOnVein { .. })
        ));
        assert!(matches!(
            angle_to_itineraries(&ang("1/4"), 1, 3),
            Err(AngleError::NotPeriodic(_))
        ));
    }

    #[test]
    fn vein_angle_search() {
        let cycle = rotation_cycle(1, 3).unwrap();
        let arc = characteristic_arc(&cycle);
        assert_eq!((arc.start, arc.end), (ang("1/7"), ang("2/7")));
        let w: SimplifiedWord = "201".parse().unwrap();
        let found = angles_for_itinerary(&w, 1, 3).unwrap();
        assert!(found.contains(&ang("1/5")));
        let w: SimplifiedWord = "20121".parse().unwrap();
        assert!(angles_for_itinerary(&w, 1, 2)
            .unwrap()
            .contains(&ang("13/31")));
        let root: SimplifiedWord = "20".parse().unwrap();
        assert_eq!(
            angles_for_itinerary(&root, 1, 3).unwrap(),
            vec![ang("1/7"), ang("2/7")]
        );
    }
}
