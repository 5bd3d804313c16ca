use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Cluster;

const BUILTIN: &str = include_str!("../../data/stoplist.txt");

/// Terms never used as event keywords.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stoplist {
    words: BTreeSet<String>,
}

impl Stoplist {
    /// Parses one token per line; blank lines and lines starting with `#`
    /// are skipped. Entries are lowercased.
    pub fn parse(source: &str) -> Self {
        let words = source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(super::normalize)
            .collect();
        Self { words }
    }

    /// The multilingual list shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN)
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().map(|w| w.as_ref().to_string()).collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The `n` most frequent window tokens that are not stopwords, ties broken
/// lexicographically.
pub fn top_keywords(cluster: &Cluster, n: usize, stoplist: &Stoplist) -> Vec<String> {
    rank_terms(cluster.token_counts().iter().map(|(t, &c)| (t.as_str(), c)), n, stoplist)
}

pub(crate) fn rank_terms<'a, I>(counts: I, n: usize, stoplist: &Stoplist) -> Vec<String>
where
    I: IntoIterator<Item = (&'a str, u32)>,
{
    let mut ranked: Vec<(&str, u32)> = counts
        .into_iter()
        .filter(|(t, _)| !stoplist.contains(t))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().take(n).map(|(t, _)| t.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_then_stoplist() {
        let stop = Stoplist::from_words(["the", "a"]);
        let counts = [("quake", 5), ("the", 9), ("usgs", 3), ("a", 7)];
        assert_eq!(rank_terms(counts, 2, &stop), ["quake", "usgs"]);
    }

    #[test]
    fn ties_break_lexicographically() {
        let stop = Stoplist::default();
        assert_eq!(rank_terms([("marathon", 3), ("boston", 3)], 1, &stop), ["boston"]);
    }

    #[test]
    fn short_vocabulary_returns_everything_left() {
        let stop = Stoplist::from_words(["the"]);
        let counts = [("the", 4), ("tsunami", 2), ("warning", 1)];
        assert_eq!(rank_terms(counts, 5, &stop), ["tsunami", "warning"]);
    }

    #[test]
    fn builtin_list_parses_comments_and_languages() {
        let stop = Stoplist::builtin();
        assert!(stop.contains("the") && stop.contains("que") && stop.contains("più"));
        assert!(stop.contains("rt"));
        assert!(!stop.contains("earthquake"));
        assert!(!stop.words.iter().any(|w| w.starts_with('#')));
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let stop = Stoplist::parse("# comment\n\n  The \nde\n#tag\n");
        assert_eq!(stop.len(), 2);
        assert!(stop.contains("the") && stop.contains("de"));
    }

    #[test]
    fn keywords_from_cluster_window() {
        use crate::model::{EngineConfig, Tweet};
        let tweets = [
            Tweet::new("1", "a", 0, "Earthquake in Aceh, the USGS says").unwrap(),
            Tweet::new("2", "b", 1, "the earthquake was strong in aceh").unwrap(),
        ];
        let c = Cluster::from_tweets(1, &tweets, &EngineConfig::default()).unwrap();
        let kw = top_keywords(&c, 3, &Stoplist::builtin());
        assert_eq!(kw, ["aceh", "earthquake", "says"]);
    }
}
