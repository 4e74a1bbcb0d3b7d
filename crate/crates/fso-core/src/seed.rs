//! Role seeds: the genotypical "code" of an organization.
//!
//! A seed is a multiset of role identifiers. Two textual forms are accepted:
//! the compact form (`"011123334"`, one digit per role) and the extended form
//! (`"0,1,1,12"`, comma-separated integers, for role ids above 9). The
//! canonical text always lists roles in nondecreasing order and uses the
//! compact form whenever every role fits in one digit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical multiset of role identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RoleSeed {
    roles: Vec<u32>,
    multiplicities: BTreeMap<u32, u32>,
    canonical_text: String,
}

impl RoleSeed {
    /// Parses either seed form and canonicalizes it.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptySeed);
        }
        let mut roles: Vec<u32> = if text.contains(',') {
            parse_extended(text)?
        } else {
            parse_compact(text)?
        };
        roles.sort_unstable();
        Ok(Self::from_sorted_roles(roles))
    }

    fn from_sorted_roles(roles: Vec<u32>) -> Self {
        debug_assert!(!roles.is_empty());
        debug_assert!(roles.windows(2).all(|w| w[0] <= w[1]));
        let mut multiplicities = BTreeMap::new();
        for &r in &roles {
            *multiplicities.entry(r).or_insert(0u32) += 1;
        }
        let canonical_text = canonical_text_of(&roles);
        RoleSeed {
            roles,
            multiplicities,
            canonical_text,
        }
    }

    /// All role occurrences in nondecreasing order.
    pub fn roles(&self) -> &[u32] {
        &self.roles
    }

    /// Distinct role ids in ascending order.
    pub fn distinct_roles(&self) -> impl Iterator<Item = u32> + '_ {
        self.multiplicities.keys().copied()
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, u32> {
        &self.multiplicities
    }

    pub fn multiplicity(&self, role: u32) -> u32 {
        self.multiplicities.get(&role).copied().unwrap_or(0)
    }

    /// Number of distinct roles.
    pub fn role_count(&self) -> usize {
        self.multiplicities.len()
    }

    /// Total number of role occurrences.
    pub fn len(&self) -> usize {
        self.roles.len()
    }

    /// Always false: a seed carries at least one role by construction.
    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.multiplicities.values().copied().max().unwrap_or(0)
    }

    pub fn canonical_text(&self) -> &str {
        &self.canonical_text
    }

    /// Multiset containment: every multiplicity of `self` is covered by `other`.
    pub fn is_subseed_of(&self, other: &RoleSeed) -> bool {
        self.multiplicities
            .iter()
            .all(|(&r, &m)| other.multiplicity(r) >= m)
    }
}

impl FromStr for RoleSeed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RoleSeed::parse(s)
    }
}

impl TryFrom<String> for RoleSeed {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        RoleSeed::parse(&s)
    }
}

impl From<RoleSeed> for String {
    fn from(seed: RoleSeed) -> String {
        seed.canonical_text
    }
}

impl fmt::Display for RoleSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text)
    }
}

fn parse_compact(text: &str) -> Result<Vec<u32>> {
    text.chars()
        .enumerate()
        .map(|(position, c)| {
            c.to_digit(10)
                .ok_or(Error::InvalidCharacter { found: c, position })
        })
        .collect()
}

fn parse_extended(text: &str) -> Result<Vec<u32>> {
    // one trailing comma is allowed: it marks a single-element extended seed
    // ("10," means role 10 once), which a bare "10" cannot express because
    // comma-free digit strings always read as compact form
    let text = text.strip_suffix(',').unwrap_or(text);
    let mut roles = Vec::new();
    let mut position = 0usize;
    for part in text.split(',') {
        let trimmed = part.trim();
        if trimmed.is_empty() {
            return Err(Error::InvalidCharacter {
                found: ',',
                position,
            });
        }
        if let Some(bad) = trimmed.chars().find(|c| !c.is_ascii_digit()) {
            let offset = part.find(bad).unwrap_or(0);
            return Err(Error::InvalidCharacter {
                found: bad,
                position: position + offset,
            });
        }
        // A multi-digit part with a leading zero reads like a compact run
        // pasted into the extended form; reject instead of reinterpreting.
        if trimmed.len() > 1 && trimmed.starts_with('0') {
            return Err(Error::MixedForm);
        }
        let value: u32 = trimmed.parse().map_err(|_| Error::InvalidConfig(
            format!("role id {trimmed} does not fit in 32 bits"),
        ))?;
        roles.push(value);
        position += part.len() + 1;
    }
    Ok(roles)
}

fn canonical_text_of(roles: &[u32]) -> String {
    if roles.iter().all(|&r| r <= 9) {
        roles.iter().map(|r| char::from(b'0' + *r as u8)).collect()
    } else {
        let mut text = roles
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",");
        if roles.len() == 1 {
            text.push(','); // keep single-element extended form unambiguous
        }
        text
    }
}

/// Multiset containment test on two seeds.
pub fn is_subseed(a: &RoleSeed, b: &RoleSeed) -> bool {
    a.is_subseed_of(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mults(seed: &RoleSeed) -> Vec<(u32, u32)> {
        seed.multiplicities().iter().map(|(&r, &m)| (r, m)).collect()
    }

    #[test]
    fn parses_figure_seed() {
        let seed = RoleSeed::parse("011123334").unwrap();
        assert_eq!(mults(&seed), vec![(0, 1), (1, 3), (2, 1), (3, 3), (4, 1)]);
        assert_eq!(seed.canonical_text(), "011123334");
    }

    #[test]
    fn parses_single_role() {
        let seed = RoleSeed::parse("0").unwrap();
        assert_eq!(mults(&seed), vec![(0, 1)]);
    }

    #[test]
    fn canonicalizes_unsorted_input() {
        let seed = RoleSeed::parse("3102").unwrap();
        assert_eq!(seed.canonical_text(), "0123");
        assert_eq!(mults(&seed), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(RoleSeed::parse(""), Err(Error::EmptySeed));
        assert_eq!(RoleSeed::parse("   "), Err(Error::EmptySeed));
    }

    #[test]
    fn rejects_non_digit_compact() {
        assert_eq!(
            RoleSeed::parse("01a2"),
            Err(Error::InvalidCharacter {
                found: 'a',
                position: 2
            })
        );
    }

    #[test]
    fn extended_form_handles_large_roles() {
        let seed = RoleSeed::parse("12,0,3,12").unwrap();
        assert_eq!(mults(&seed), vec![(0, 1), (3, 1), (12, 2)]);
        assert_eq!(seed.canonical_text(), "0,3,12,12");
    }

    #[test]
    fn rejects_mixed_form() {
        assert_eq!(RoleSeed::parse("011,2"), Err(Error::MixedForm));
    }

    #[test]
    fn single_large_role_uses_trailing_comma_form() {
        let seed = RoleSeed::parse("10,").unwrap();
        assert_eq!(mults(&seed), vec![(10, 1)]);
        assert_eq!(seed.canonical_text(), "10,");
        // whereas the bare digit string is compact
        let compact = RoleSeed::parse("10").unwrap();
        assert_eq!(mults(&compact), vec![(0, 1), (1, 1)]);
        assert_eq!(compact.canonical_text(), "01");
    }

    #[test]
    fn rejects_empty_extended_part() {
        assert!(matches!(
            RoleSeed::parse("1,,2"),
            Err(Error::InvalidCharacter { .. })
        ));
    }

    #[test]
    fn subseed_on_figure_pair() {
        let a = RoleSeed::parse("011123334").unwrap();
        let b = RoleSeed::parse("011112233334").unwrap();
        assert!(is_subseed(&a, &b));
        assert!(!is_subseed(&b, &a));
    }

    #[test]
    fn subseed_is_reflexive_on_example() {
        let a = RoleSeed::parse("011123334").unwrap();
        assert!(is_subseed(&a, &a));
    }

    #[test]
    fn subseed_rejects_absent_role() {
        let a = RoleSeed::parse("05").unwrap();
        let b = RoleSeed::parse("011112233334").unwrap();
        assert!(!is_subseed(&a, &b));
    }

    /// Subsequence containment on the token sequence; the independent
    /// formulation of subseed used to cross-check the multiplicity one.
    fn is_token_subsequence(a: &RoleSeed, b: &RoleSeed) -> bool {
        let mut it = b.roles().iter();
        a.roles().iter().all(|ra| it.any(|rb| rb == ra))
    }

    fn arb_seed(max_role: u32, max_len: usize) -> impl Strategy<Value = RoleSeed> {
        proptest::collection::vec(0..=max_role, 1..=max_len)
            .prop_map(|mut roles| {
                roles.sort_unstable();
                RoleSeed::from_sorted_roles(roles)
            })
    }

    proptest! {
        #[test]
        fn parse_is_idempotent_on_canonical_text(seed in arb_seed(12, 10)) {
            let reparsed = RoleSeed::parse(seed.canonical_text()).unwrap();
            prop_assert_eq!(reparsed, seed);
        }

        #[test]
        fn subseed_is_a_partial_order(
            a in arb_seed(4, 8),
            b in arb_seed(4, 8),
            c in arb_seed(4, 8),
        ) {
            // reflexive
            prop_assert!(is_subseed(&a, &a));
            // antisymmetric
            if is_subseed(&a, &b) && is_subseed(&b, &a) {
                prop_assert_eq!(&a, &b);
            }
            // transitive
            if is_subseed(&a, &b) && is_subseed(&b, &c) {
                prop_assert!(is_subseed(&a, &c));
            }
        }

        #[test]
        fn subsequence_agrees_with_multiset_containment(
            a in arb_seed(5, 8),
            b in arb_seed(5, 10),
        ) {
            prop_assert_eq!(is_subseed(&a, &b), is_token_subsequence(&a, &b));
        }
    }
}
