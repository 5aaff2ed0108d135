//! Finite digit words and eventually periodic digit sequences.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, ..., m}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitWord {
    digits: Vec<u32>,
    m: u32,
}

impl DigitWord {
    pub fn new(digits: Vec<u32>, m: u32) -> Result<Self> {
        check_digits(&digits, m, 0)?;
        Ok(DigitWord { digits, m })
    }

    pub(crate) fn from_raw(digits: Vec<u32>, m: u32) -> Self {
        DigitWord { digits, m }
    }

    pub fn empty(m: u32) -> Self {
        DigitWord { digits: Vec::new(), m }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reflect(&self) -> Self {
        DigitWord { digits: self.digits.iter().map(|d| self.m - d).collect(), m: self.m }
    }

    pub fn parse(text: &str, m: u32) -> Result<Self> {
        DigitWord::new(parse_digits(text)?, m)
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_digits(&self.digits, self.m > 9))
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_digits(digits: &[u32], m: u32, offset: usize) -> Result<()> {
    for (i, &d) in digits.iter().enumerate() {
        if d > m {
            return Err(Error::DigitRange { digit: d as i64, position: offset + i + 1, max: m });
        }
    }
    Ok(())
}

pub(crate) fn format_digits<T: fmt::Display>(digits: &[T], commas: bool) -> String {
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    parts.join(if commas { "," } else { "" })
}

/// Digits of a word, either packed ("0110") or comma separated ("10,2,3").
pub(crate) fn parse_signed(text: &str) -> Result<Vec<i64>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    if t.contains(',') || t.contains('-') {
        t.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad digit {p:?} in {text:?}"))))
            .collect()
    } else {
        t.chars()
            .map(|c| c.to_digit(10).map(i64::from).ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {text:?}"))))
            .collect()
    }
}

fn parse_digits(text: &str) -> Result<Vec<u32>> {
    parse_signed(text)?
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            u32::try_from(d).map_err(|_| Error::DigitRange { digit: d, position: i + 1, max: 0 })
        })
        .collect()
}

/// Splits "pre(period)" into its two parts.
pub(crate) fn split_periodic(text: &str) -> Result<(&str, &str)> {
    let t = text.trim();
    let open = t.rfind('(').ok_or_else(|| Error::Parse(format!("expected pre(period), got {text:?}")))?;
    if !t.ends_with(')') {
        return Err(Error::Parse(format!("expected pre(period), got {text:?}")));
    }
    Ok((&t[..open], &t[open + 1..t.len() - 1]))
}

/// Brings `(pre, per)` to canonical form: primitive period, shortest preperiod.
pub(crate) fn canonicalize<T: PartialEq + Clone>(pre: &mut Vec<T>, per: &mut Vec<T>) {
    let n = per.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| per[i] == per[i - p]) {
            per.truncate(p);
            break;
        }
    }
    while let Some(last) = pre.last() {
        if *last != per[per.len() - 1] {
            break;
        }
        pre.pop();
        per.rotate_right(1);
    }
}

/// A digit sequence `pre period period ...` over `{0, ..., m}`, always kept canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EventuallyPeriodicSeq {
    pre: Vec<u32>,
    per: Vec<u32>,
    m: u32,
}

impl EventuallyPeriodicSeq {
    pub fn new(mut pre: Vec<u32>, mut per: Vec<u32>, m: u32) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::domain("period must be nonempty"));
        }
        check_digits(&pre, m, 0)?;
        check_digits(&per, m, pre.len())?;
        canonicalize(&mut pre, &mut per);
        Ok(EventuallyPeriodicSeq { pre, per, m })
    }

    pub fn constant(d: u32, m: u32) -> Result<Self> {
        Self::new(Vec::new(), vec![d], m)
    }

    pub fn zeros(m: u32) -> Self {
        EventuallyPeriodicSeq { pre: Vec::new(), per: vec![0], m }
    }

    /// The word followed by `0^∞`.
    pub fn finite(word: &DigitWord) -> Self {
        Self::new(word.digits.clone(), vec![0], word.m).expect("word digits already checked")
    }

    pub fn periodic(word: &DigitWord) -> Result<Self> {
        Self::new(Vec::new(), word.digits.clone(), word.m)
    }

    /// Parses "pre(period)" such as "11(010)" or "(1,10)".
    pub fn parse(text: &str, m: u32) -> Result<Self> {
        let (pre, per) = split_periodic(text)?;
        Self::new(parse_digits(pre)?, parse_digits(per)?, m)
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.pre
    }

    pub fn period(&self) -> &[u32] {
        &self.per
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Ends in `0^∞`, i.e. is a finite sequence in the usual sense.
    pub fn is_finite(&self) -> bool {
        self.per == [0]
    }

    /// Digit at 0-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> DigitWord {
        DigitWord { digits: (0..n).map(|i| self.at(i)).collect(), m: self.m }
    }

    pub fn reflect(&self) -> Self {
        let f = |v: &[u32]| v.iter().map(|d| self.m - d).collect::<Vec<_>>();
        // reflection preserves canonical form
        EventuallyPeriodicSeq { pre: f(&self.pre), per: f(&self.per), m: self.m }
    }

    /// Drops the first `n` digits.
    pub fn shift(&self, n: usize) -> Self {
        if n <= self.pre.len() {
            return EventuallyPeriodicSeq { pre: self.pre[n..].to_vec(), per: self.per.clone(), m: self.m };
        }
        let k = (n - self.pre.len()) % self.per.len();
        let mut per = self.per.clone();
        per.rotate_left(k);
        EventuallyPeriodicSeq { pre: Vec::new(), per, m: self.m }
    }

    /// Prepends a word.
    pub fn prepend(&self, word: &[u32]) -> Result<Self> {
        let mut pre = word.to_vec();
        pre.extend_from_slice(&self.pre);
        Self::new(pre, self.per.clone(), self.m)
    }

    /// Number of symbols after which comparison with `other` is decided.
    pub(crate) fn horizon(&self, other: &Self) -> usize {
        self.pre.len().max(other.pre.len()) + self.per.len().lcm(&other.per.len())
    }

    pub fn lex_compare(&self, other: &Self) -> Result<Ordering> {
        if self.m != other.m {
            return Err(Error::domain("sequences over different alphabets"));
        }
        Ok(self.cmp_digits(other))
    }

    fn cmp_digits(&self, other: &Self) -> Ordering {
        for i in 0..self.horizon(other) {
            match self.at(i).cmp(&other.at(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Checks `shift(s, n) ⪯ s` for every `n ≥ 1`; on failure returns the first offending `n`.
    pub fn self_admissible(&self) -> std::result::Result<(), usize> {
        // shifts beyond pre + per repeat earlier ones
        for n in 1..=self.pre.len() + self.per.len() {
            if self.shift(n).cmp_digits(self) == Ordering::Greater {
                return Err(n);
            }
        }
        Ok(())
    }

    /// Every suffix position up to where the tails start repeating.
    pub(crate) fn distinct_tail_count(&self) -> usize {
        self.pre.len() + self.per.len()
    }
}

impl PartialOrd for EventuallyPeriodicSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EventuallyPeriodicSeq {
    /// Lexicographic order; the alphabet only breaks ties between otherwise equal sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_digits(other).then(self.m.cmp(&other.m))
    }
}

impl fmt::Display for EventuallyPeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.m > 9;
        write!(f, "{}({})", format_digits(&self.pre, commas), format_digits(&self.per, commas))
    }
}

impl Serialize for EventuallyPeriodicSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Every canonical sequence over `{0, ..., m}` whose canonical preperiod has
/// length at most `max_pre` and whose primitive period has length between 1
/// and `max_per`, in lexicographic order of (preperiod, period).
pub fn all_sequences(m: u32, max_pre: usize, max_per: usize) -> Vec<EventuallyPeriodicSeq> {
    fn words(m: u32, len: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..=m).map(move |d| {
                        let mut v = w.clone();
                        v.push(d);
                        v
                    })
                })
                .collect();
        }
        out
    }
    let mut set = std::collections::BTreeSet::new();
    for p in 0..=max_pre {
        for pre in words(m, p) {
            for r in 1..=max_per {
                for per in words(m, r) {
                    let s = EventuallyPeriodicSeq::new(pre.clone(), per, m).expect("digits in range");
                    set.insert((s.pre.clone(), s.per.clone()));
                }
            }
        }
    }
    set.into_iter().map(|(pre, per)| EventuallyPeriodicSeq { pre, per, m }).collect()
}

/// `τ_i = popcount(i) mod 2`.
pub fn thue_morse_digit(i: u64) -> u32 {
    i.count_ones() & 1
}

/// `τ_1 ... τ_n` of the Thue-Morse sequence.
pub fn thue_morse(n: usize) -> DigitWord {
    DigitWord { digits: (1..=n as u64).map(thue_morse_digit).collect(), m: 1 }
}

/// First `n` digits of the quasi-greedy expansion of 1 at the Komornik-Loreti base.
pub fn kl_sequence(m: u32, n: usize) -> DigitWord {
    let k = m / 2;
    let digits = (1..=n as u64)
        .map(|i| {
            if m % 2 == 1 {
                k + thue_morse_digit(i)
            } else {
                k + thue_morse_digit(i) - thue_morse_digit(i - 1)
            }
        })
        .collect();
    DigitWord { digits, m }
}

/// Coefficients of `g(x) = 1 + Σ d_i x^i` with an eventually periodic sequence
/// `d_i ∈ {-m, ..., m}`, typically `d_i = b_i - a_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiffSeries {
    pre: Vec<i64>,
    per: Vec<i64>,
    m: u32,
}

impl DiffSeries {
    pub fn new(mut pre: Vec<i64>, mut per: Vec<i64>, m: u32) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::domain("period must be nonempty"));
        }
        for (i, &d) in pre.iter().chain(per.iter()).enumerate() {
            if d.unsigned_abs() > m as u64 {
                return Err(Error::DigitRange { digit: d, position: i + 1, max: m });
            }
        }
        canonicalize(&mut pre, &mut per);
        Ok(DiffSeries { pre, per, m })
    }

    /// `d_i = b_i - a_i`.
    pub fn from_pair(a: &EventuallyPeriodicSeq, b: &EventuallyPeriodicSeq) -> Result<Self> {
        if a.m != b.m {
            return Err(Error::domain("sequences over different alphabets"));
        }
        let p = a.pre.len().max(b.pre.len());
        let r = a.per.len().lcm(&b.per.len());
        let d = |i: usize| b.at(i) as i64 - a.at(i) as i64;
        DiffSeries::new((0..p).map(d).collect(), (p..p + r).map(d).collect(), a.m)
    }

    /// Parses "pre(period)"; the preperiod may itself be parenthesised, as in "(-1,-1,-1)(0)".
    pub fn parse(text: &str, m: u32) -> Result<Self> {
        let (pre, per) = split_periodic(text)?;
        let pre = pre.trim();
        let pre = pre.strip_prefix('(').and_then(|p| p.strip_suffix(')')).unwrap_or(pre);
        DiffSeries::new(parse_signed(pre)?, parse_signed(per)?, m)
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.pre
    }

    pub fn period(&self) -> &[i64] {
        &self.per
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Coefficient `d_i` for `i ≥ 1`.
    pub fn coeff(&self, i: usize) -> i64 {
        let j = i - 1;
        if j < self.pre.len() {
            self.pre[j]
        } else {
            self.per[(j - self.pre.len()) % self.per.len()]
        }
    }

    pub fn negate(&self) -> Self {
        DiffSeries { pre: self.pre.iter().map(|d| -d).collect(), per: self.per.iter().map(|d| -d).collect(), m: self.m }
    }

    /// Parts with positive and with negated negative coefficients.
    pub(crate) fn split(&self) -> (Vec<i64>, Vec<i64>, Vec<i64>, Vec<i64>) {
        let pos = |v: &[i64]| v.iter().map(|&d| d.max(0)).collect::<Vec<_>>();
        let neg = |v: &[i64]| v.iter().map(|&d| (-d).max(0)).collect::<Vec<_>>();
        (pos(&self.pre), pos(&self.per), neg(&self.pre), neg(&self.per))
    }
}

impl fmt::Display for DiffSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.m > 9 || self.pre.iter().chain(&self.per).any(|d| *d < 0);
        let pre = format_digits(&self.pre, commas);
        let per = format_digits(&self.per, commas);
        if commas && !pre.is_empty() {
            write!(f, "({pre})({per})")
        } else {
            write!(f, "{pre}({per})")
        }
    }
}

impl Serialize for DiffSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(t: &str, m: u32) -> EventuallyPeriodicSeq {
        EventuallyPeriodicSeq::parse(t, m).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(seq("(1010)", 1), seq("(10)", 1));
        assert_eq!(seq("10(10)", 1), seq("(10)", 1));
        assert_eq!(seq("1(01)", 1), seq("(10)", 1));
        assert_eq!(seq("110(0)", 1).to_string(), "11(0)");
        assert_eq!(seq("(0,10)", 10).to_string(), "(0,10)");
        assert!(EventuallyPeriodicSeq::parse("(2)", 1).is_err());
        assert!(EventuallyPeriodicSeq::parse("11", 1).is_err());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(seq("(10)", 1).lex_compare(&seq("11(0)", 1)).unwrap(), Ordering::Less);
        assert_eq!(seq("0(01)", 1).lex_compare(&seq("(001)", 1)).unwrap(), Ordering::Greater);
        assert!(seq("(1)", 1).lex_compare(&seq("(1)", 2)).is_err());
    }

    #[test]
    fn reflect_and_shift_examples() {
        assert_eq!(seq("(110)", 1).reflect(), seq("(001)", 1));
        assert_eq!(seq("21(0)", 2).reflect(), seq("01(2)", 2));
        assert_eq!(seq("(110)", 1).shift(1), seq("(101)", 1));
        assert_eq!(seq("1(0)", 1).shift(5), seq("(0)", 1));
    }

    #[test]
    fn diff_series_text_round_trip() {
        let d = DiffSeries::parse("(-1,-1,-1)(0)", 1).unwrap();
        assert_eq!(d.preperiod(), &[-1, -1, -1]);
        assert_eq!(d.to_string(), "(-1,-1,-1)(0)");
        assert_eq!(DiffSeries::parse(&d.to_string(), 1).unwrap(), d);
        assert_eq!(DiffSeries::parse("(-1,0)", 1).unwrap().period(), &[-1, 0]);
        assert!(DiffSeries::parse("(2)", 1).is_err());
        let a = seq("111(0)", 1);
        let b = seq("(0)", 1);
        assert_eq!(DiffSeries::from_pair(&a, &b).unwrap(), d);
    }

    #[test]
    fn thue_morse_prefix_and_recurrence() {
        assert_eq!(thue_morse(8).digits(), &[1, 1, 0, 1, 0, 0, 1, 1]);
        assert_eq!(thue_morse(1).digits(), &[1]);
        for i in 1..500u64 {
            assert_eq!(thue_morse_digit(2 * i), thue_morse_digit(i));
            assert_eq!(thue_morse_digit(2 * i + 1), 1 - thue_morse_digit(i));
        }
    }

    #[test]
    fn sequence_enumeration() {
        let all = all_sequences(1, 0, 1);
        assert_eq!(all, vec![seq("(0)", 1), seq("(1)", 1)]);
        let all = all_sequences(1, 2, 2);
        // canonical forms are distinct and respect the bounds
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(|s| s.preperiod().len() <= 2 && s.period().len() <= 2));
        assert!(all.contains(&seq("01(10)", 1)) && !all.contains(&seq("001(0)", 1)));
    }

    #[test]
    fn kl_prefixes() {
        assert_eq!(kl_sequence(1, 8).digits(), &[1, 1, 0, 1, 0, 0, 1, 1]);
        assert_eq!(kl_sequence(2, 8).digits(), &[2, 1, 0, 2, 0, 1, 2, 1]);
        assert_eq!(kl_sequence(3, 8).digits(), &[2, 2, 1, 2, 1, 1, 2, 2]);
    }

    #[test]
    fn kl_prefixes_self_admissible() {
        for m in 1..=6 {
            let w = kl_sequence(m, 256);
            let d = w.digits();
            for n in 1..d.len() {
                assert!(d[n..] <= d[..d.len() - n], "M={m} shift {n}");
            }
        }
    }

    fn arb_seq() -> impl Strategy<Value = EventuallyPeriodicSeq> {
        (1u32..=3).prop_flat_map(|m| {
            (prop::collection::vec(0..=m, 0..5), prop::collection::vec(0..=m, 1..5))
                .prop_map(move |(p, q)| EventuallyPeriodicSeq::new(p, q, m).unwrap())
        })
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent(s in arb_seq()) {
            let again = EventuallyPeriodicSeq::new(s.preperiod().to_vec(), s.period().to_vec(), s.m()).unwrap();
            prop_assert_eq!(&again, &s);
            prop_assert_eq!(EventuallyPeriodicSeq::parse(&s.to_string(), s.m()).unwrap(), s);
        }

        #[test]
        fn compare_matches_unrolled(a in arb_seq(), b in arb_seq()) {
            let b = EventuallyPeriodicSeq::new(b.preperiod().iter().map(|d| d.min(&a.m()).to_owned()).collect(),
                b.period().iter().map(|d| d.min(&a.m()).to_owned()).collect(), a.m()).unwrap();
            let ua = a.prefix(200);
            let ub = b.prefix(200);
            prop_assert_eq!(a.lex_compare(&b).unwrap(), ua.digits().cmp(ub.digits()));
            prop_assert_eq!(b.reflect().lex_compare(&a.reflect()).unwrap(), a.lex_compare(&b).unwrap());
            prop_assert_eq!(a.reflect().reflect(), a.clone());
        }

        #[test]
        fn shift_agrees_with_digits(s in arb_seq(), n in 0usize..12) {
            let t = s.shift(n);
            for i in 0..30 {
                prop_assert_eq!(t.at(i), s.at(i + n));
            }
        }
    }
}
