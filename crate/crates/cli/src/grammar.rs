//! Input grammars for the CLI: gamma-monomial expressions and
//! difference-equation block specifications. EBNF lives in the README.

use carlitz_core::{
    build_carlitz_block, build_polylog_block, build_tensor_block, direct_sum, make_field,
    parse_poly, GammaArg, GammaMonomial, MotiveBlock,
};

pub fn err(msg: impl Into<String>) -> String {
    msg.into()
}

/// Parses a gamma monomial: factors `(a/b)!^e` and `pi^e` joined by `*`.
/// Examples: `(-1/8)!`, `(-1/8)!^2 * (1/3)!^-1 * pi^3`.
pub fn parse_monomial(input: &str) -> Result<GammaMonomial, String> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact == "1" {
        return Ok(GammaMonomial::new());
    }
    let mut m = GammaMonomial::new();
    for factor in compact.split('*') {
        if factor.is_empty() {
            return Err(err("empty factor in monomial"));
        }
        if let Some(rest) = factor.strip_prefix("pi") {
            let exp = parse_exponent(rest)?;
            m = m.with_pi(exp);
            continue;
        }
        let inner_end = factor
            .find(")!")
            .ok_or_else(|| err(format!("factor '{factor}' is not '(a/b)!' or 'pi'")))?;
        if !factor.starts_with('(') {
            return Err(err(format!("factor '{factor}' must start with '('")));
        }
        let frac = &factor[1..inner_end];
        let exp = parse_exponent(&factor[inner_end + 2..])?;
        let (num, den) = match frac.split_once('/') {
            Some((a, b)) => (
                a.parse::<i64>()
                    .map_err(|_| err(format!("bad numerator '{a}'")))?,
                b.parse::<i64>()
                    .map_err(|_| err(format!("bad denominator '{b}'")))?,
            ),
            None => (
                frac.parse::<i64>()
                    .map_err(|_| err(format!("bad integer argument '{frac}'")))?,
                1,
            ),
        };
        let arg = GammaArg::new(num, den).map_err(|e| e.to_string())?;
        m = m.with_factor(arg, exp);
    }
    Ok(m)
}

fn parse_exponent(rest: &str) -> Result<i64, String> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .ok_or_else(|| err(format!("expected '^exp', found '{rest}'")))?
        .parse::<i64>()
        .map_err(|_| err(format!("bad exponent in '{rest}'")))
}

/// One term of a block specification.
enum BlockTerm {
    Carlitz { ell: u32 },
    Tensor { n: u32 },
    Polylog { n: u32, alphas: Vec<String> },
}

/// Parses a block spec: terms `carlitz:L`, `tensor:N`,
/// `polylog:N:alpha,...` joined by `+` (at parenthesis depth zero; alphas
/// containing `+` must be parenthesized). Builds the direct sum in the
/// ambient field K_L with L = lcm of the configured level and every Carlitz
/// level mentioned.
pub fn build_block_spec(
    spec: &str,
    p: u64,
    e: u32,
    ell: u32,
    tdeg: usize,
    prec: i64,
) -> Result<MotiveBlock, String> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let chars: Vec<char> = compact.chars().collect();
    let mut pieces = Vec::new();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(chars[start..].iter().collect::<String>());

    let mut ambient_ell = ell.max(1);
    for piece in &pieces {
        let mut parts = piece.split(':');
        let kind = parts.next().unwrap_or_default();
        match kind {
            "carlitz" => {
                let l: u32 = parts
                    .next()
                    .ok_or_else(|| err("carlitz needs a level, e.g. carlitz:2"))?
                    .parse()
                    .map_err(|_| err("bad carlitz level"))?;
                ambient_ell = lcm(ambient_ell, l);
                terms.push(BlockTerm::Carlitz { ell: l });
            }
            "tensor" => {
                let n: u32 = parts
                    .next()
                    .ok_or_else(|| err("tensor needs a power, e.g. tensor:2"))?
                    .parse()
                    .map_err(|_| err("bad tensor power"))?;
                terms.push(BlockTerm::Tensor { n });
            }
            "polylog" => {
                let n: u32 = parts
                    .next()
                    .ok_or_else(|| err("polylog needs a weight, e.g. polylog:1:1,θ"))?
                    .parse()
                    .map_err(|_| err("bad polylog weight"))?;
                let alphas_str = parts
                    .next()
                    .ok_or_else(|| err("polylog needs arguments, e.g. polylog:1:1,θ"))?;
                let alphas = alphas_str.split(',').map(str::to_string).collect();
                terms.push(BlockTerm::Polylog { n, alphas });
            }
            other => return Err(err(format!("unknown block kind '{other}'"))),
        }
    }
    if terms.is_empty() {
        return Err(err("empty block specification"));
    }

    let ambient = make_field(p, e, ambient_ell).map_err(|e| e.to_string())?;
    let fq = make_field(p, e, 1).map_err(|e| e.to_string())?;
    let mut blocks = Vec::new();
    for t in terms {
        let b = match t {
            BlockTerm::Carlitz { ell: l } => {
                if l == ambient_ell {
                    build_carlitz_block(&ambient, tdeg, prec)
                } else {
                    // A Carlitz block lives at its own level; mixing levels
                    // in one sum needs the ambient to be that level.
                    return Err(err(format!(
                        "carlitz:{l} cannot join a level-{ambient_ell} sum; \
                         set --ell so the levels agree"
                    )));
                }
            }
            BlockTerm::Tensor { n } => build_tensor_block(&ambient, n, tdeg, prec),
            BlockTerm::Polylog { n, alphas } => {
                let polys = alphas
                    .iter()
                    .map(|a| {
                        parse_poly(&fq, a.trim_start_matches('(').trim_end_matches(')'))
                            .map_err(|e| e.to_string())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                build_polylog_block(&ambient, n, &polys, tdeg, prec)
            }
        }
        .map_err(|e| e.to_string())?;
        blocks.push(b);
    }
    direct_sum(&blocks).map_err(|e| e.to_string())
}

fn lcm(a: u32, b: u32) -> u32 {
    let gcd = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd * b
}
