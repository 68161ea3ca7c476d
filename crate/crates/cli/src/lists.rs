//! Comma lists with `a:b` inclusive ranges, e.g. `5:12` or `3,10,100,iid`.

use anyhow::{bail, Context, Result};
use rex_core::simulation::RankSpec;

fn parse_item(item: &str, out: &mut Vec<u64>) -> Result<()> {
    match item.split_once(':') {
        Some((a, b)) => {
            let a: u64 = a
                .trim()
                .parse()
                .with_context(|| format!("bad range start in `{item}`"))?;
            let b: u64 = b
                .trim()
                .parse()
                .with_context(|| format!("bad range end in `{item}`"))?;
            if a > b {
                bail!("empty range `{item}`");
            }
            out.extend(a..=b);
        }
        None => out.push(
            item.trim()
                .parse()
                .with_context(|| format!("`{item}` is not a nonnegative integer"))?,
        ),
    }
    Ok(())
}

pub fn parse_u64_list(spec: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        parse_item(item, &mut out)?;
    }
    if out.is_empty() {
        bail!("empty list `{spec}`");
    }
    Ok(out)
}

pub fn parse_ranks(spec: &str) -> Result<Vec<RankSpec>> {
    let mut out = Vec::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        if item.trim().eq_ignore_ascii_case("iid") {
            out.push(RankSpec::Iid);
            continue;
        }
        let mut ds = Vec::new();
        parse_item(item, &mut ds)?;
        for d in ds {
            if d == 0 {
                bail!("ranks must be positive");
            }
            out.push(RankSpec::Rank(d));
        }
    }
    if out.is_empty() {
        bail!("empty rank list `{spec}`");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_u64_list("5:8").unwrap(), vec![5, 6, 7, 8]);
        assert_eq!(parse_u64_list("3000, 15000").unwrap(), vec![3000, 15000]);
        assert_eq!(parse_u64_list("1,4:5,9").unwrap(), vec![1, 4, 5, 9]);
        assert!(parse_u64_list("8:5").is_err());
        assert!(parse_u64_list("x").is_err());
        assert!(parse_u64_list("").is_err());
    }

    #[test]
    fn rank_lists() {
        assert_eq!(
            parse_ranks("3,10:11,IID").unwrap(),
            vec![
                RankSpec::Rank(3),
                RankSpec::Rank(10),
                RankSpec::Rank(11),
                RankSpec::Iid
            ]
        );
        assert!(parse_ranks("0").is_err());
        assert!(parse_ranks("3,,").is_ok());
    }
}
