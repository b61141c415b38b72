//! Direct membership predicates on words written one character per symbol.
//! They serve as oracles and involve no automata.

/// `w = w^R`.
pub fn mirror(w: &str) -> bool {
    w.chars().eq(w.chars().rev())
}

/// `x $ x^R` with `x` free of `$`.
pub fn marked_palindrome(w: &str) -> bool {
    match w.split_once('$') {
        Some((x, y)) => !y.contains('$') && x.chars().eq(y.chars().rev()),
        None => false,
    }
}

/// `x $ x` with `x ∈ {a,b}*`.
pub fn copy(w: &str) -> bool {
    ln_member(1, w)
}

/// `u c^x v $ u v` with `u, v ∈ {a,b}*`, `x ≥ 0`.
pub fn lrc(w: &str) -> bool {
    let Some((left, right)) = w.split_once('$') else { return false };
    if right.contains('$') || !right.chars().all(|c| c == 'a' || c == 'b') {
        return false;
    }
    let Some(start) = left.find('c') else {
        return left == right;
    };
    let end = left.rfind('c').expect("found one c") + 1;
    let (u, cs, v) = (&left[..start], &left[start..end], &left[end..]);
    cs.chars().all(|c| c == 'c') && format!("{u}{v}") == right && u.chars().chain(v.chars()).all(|c| c == 'a' || c == 'b')
}

fn fibonacci(j: usize) -> usize {
    let (mut a, mut b) = (0usize, 1usize);
    for _ in 0..j {
        (a, b) = (b, a + b);
    }
    a
}

/// `a^(i·F(2)) $ a^(i·F(3)) $ … $ a^(i·F(n+1))` for some `i ≥ 1`, with
/// `F(1) = F(2) = 1`.
pub fn fibonacci_blocks(n: usize, w: &str) -> bool {
    let blocks: Vec<&str> = w.split('$').collect();
    if n == 0 || blocks.len() != n || blocks.iter().any(|b| b.chars().any(|c| c != 'a')) {
        return false;
    }
    let i = blocks[0].len();
    i >= 1 && blocks.iter().enumerate().all(|(j, b)| b.len() == i * fibonacci(j + 2))
}

/// `a^(2^n)` for some `n ≥ 1`.
pub fn l1(w: &str) -> bool {
    w.chars().all(|c| c == 'a') && w.len() >= 2 && w.len().is_power_of_two()
}

/// `a b a^2 b … a^n b` for some `n ≥ 1`.
pub fn l2(w: &str) -> bool {
    let Some(body) = w.strip_suffix('b') else { return false };
    body.split('b').enumerate().all(|(i, block)| block.len() == i + 1 && block.chars().all(|c| c == 'a'))
}

/// `w1 $ w2 $ … $ w2n` with `wi ∈ {a,b}*` and `wi = w(2n+1-i)`.
pub fn ln_member(n: usize, w: &str) -> bool {
    let blocks: Vec<&str> = w.split('$').collect();
    n >= 1
        && blocks.len() == 2 * n
        && blocks.iter().all(|b| b.chars().all(|c| c == 'a' || c == 'b'))
        && (0..n).all(|i| blocks[i] == blocks[2 * n - 1 - i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples() {
        assert!(mirror("abba") && !mirror("ab"));
        assert!(marked_palindrome("ab$ba") && !marked_palindrome("ab$ab"));
        assert!(copy("ab$ab") && copy("$") && !copy("ab$ba"));
        assert!(lrc("abccb$abb") && lrc("$") && lrc("ab$ab") && !lrc("abcb$ab"));
        assert!(fibonacci_blocks(4, "aa$aaaa$aaaaaa$aaaaaaaaaa") && !fibonacci_blocks(4, "a$a$a$a"));
        assert!(fibonacci_blocks(3, "a$aa$aaa") && !fibonacci_blocks(3, "a$a$aa"));
        assert!(l1("aaaa") && !l1("aaa") && !l1("a"));
        assert!(l2("ab") && l2("abaabaaab") && !l2("abab") && !l2("aab") && !l2("abaaab"));
        assert!(ln_member(3, "ab$b$a$a$b$ab") && !ln_member(3, "ab$b$a$a$b$ba") && ln_member(1, "ab$ab"));
        assert!(!ln_member(3, "a$a$a$a$a$a$a"));
    }
}
