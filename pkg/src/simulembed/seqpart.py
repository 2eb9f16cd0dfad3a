"""
単調部分列の抽出と分割モジュール

整数の多重集合列、および整数 k 組の列を「単調な部分列」に分割する。
ここで単調とは非減少（nondec）または非増加（noninc）のことで、
k 組の場合は各次元がそれぞれ単調であることを意味する。

主な関数:
- longest_monotonic_run: 最長の単調部分列（patience sorting で O(n log n)）
- tie_break_perturb: 重複値を j/(|S_x|+1) だけずらして相異なる有理数列にする
- greedy_partition: 最長の単調部分列を繰り返し取り除く分割
- tuple_partition: k 組の列を次元ごとの入れ子抽出で分割する
- lemma_main_extract: 値の種類数 c を使った長い単調部分列の構成的抽出

使用例:
    from fractions import Fraction
    from simulembed.seqpart import greedy_partition, longest_monotonic_run

    run = longest_monotonic_run([3, 1, 2, 1, 3])
    print(run.indices)  # (1, 3, 4)

    partition = greedy_partition([1, 3, 1, 3, 1, 3], Fraction(1, 2))
    print(len(partition.runs))  # 2

すべての関数は不変な入力に対する純粋関数で、スレッドから同時に呼び出してよい。
"""

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from simulembed.errors import EmptySequenceError, MalformedInputError, ParameterError

# 分割の既定値。最長単調部分列は常に ⌈√n⌉ 以上の長さを持つ
DEFAULT_DELTA = Fraction(1, 2)


class Direction(str, Enum):
    """単調の向き。JSON にはこの値がそのまま書き出される"""

    NONDEC = "nondec"
    NONINC = "noninc"


@dataclass(frozen=True)
class MonotonicRun:
    """
    単調部分列（元の列への添字の集合）

    Attributes:
        indices: 元の列への添字（狭義単調増加）
        directions: 次元ごとの単調の向き（整数列なら長さ 1）
    """

    indices: tuple[int, ...]
    directions: tuple[Direction, ...]

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class MonotonicPartition:
    """
    列全体を覆う、互いに素な単調部分列の集まり

    Attributes:
        runs: 取り出した順の単調部分列
        source_length: 元の列の長さ n
        delta: 各抽出で保証したい指数（k 組の場合は δ^k）
        constant: 上界の定数 d = 2(1-δ)+1
        hypothesis_held: すべての抽出で長さ ≥ ⌈n_rem^δ⌉ が成り立ったか
    """

    runs: tuple[MonotonicRun, ...]
    source_length: int
    delta: Fraction = DEFAULT_DELTA
    constant: Fraction = Fraction(2)
    hypothesis_held: bool = True

    @property
    def bound(self) -> float:
        """部分列の個数の上界 d·n^{1-δ}/(1-δ)"""
        if self.source_length == 0:
            return 0.0
        one_minus = 1 - self.delta
        return float(self.constant) * self.source_length ** float(one_minus) / float(one_minus)

    @property
    def within_bound(self) -> bool:
        return len(self.runs) <= self.bound

    @property
    def implied_constant(self) -> float:
        """実測の個数から逆算した d（監査用）"""
        if self.source_length == 0:
            return 0.0
        one_minus = float(1 - self.delta)
        return len(self.runs) * one_minus / self.source_length**one_minus


@dataclass(frozen=True)
class LemmaMainResult:
    """
    lemma_main_extract の結果

    Attributes:
        run: 取り出した単調部分列
        preconditions_met: n = kc+1 かつ c が平方数だったか
        guaranteed_length: 理論上保証される長さ
        source: "construction"（構成的手順の結果）または "longest"（最長部分列）
    """

    run: MonotonicRun
    preconditions_met: bool
    guaranteed_length: int
    source: str


def _nondecreasing_chain(values: Sequence) -> list[int]:
    """最長非減少部分列の添字を返す（patience sorting）"""
    tails: list = []  # 長さ i+1 の部分列の末尾値の最小
    tails_at: list[int] = []  # その末尾の添字
    previous = [-1] * len(values)

    for i, value in enumerate(values):
        # 等しい値は右側に積む（非減少なので等号を許す）
        pos = bisect_right(tails, value)
        if pos > 0:
            previous[i] = tails_at[pos - 1]
        if pos == len(tails):
            tails.append(value)
            tails_at.append(i)
        else:
            tails[pos] = value
            tails_at[pos] = i

    chain: list[int] = []
    cursor = tails_at[-1] if tails_at else -1
    while cursor != -1:
        chain.append(cursor)
        cursor = previous[cursor]
    chain.reverse()
    return chain


def _chain_lengths(values: Sequence) -> tuple[list[int], list[int]]:
    """
    各要素で終わる最長単調部分列の長さと、その直前の要素の添字

    patience sorting の挿入位置 + 1 が「その要素で終わる最長鎖の長さ」になる。
    """
    tails: list = []
    tails_at: list[int] = []
    lengths = [0] * len(values)
    previous = [-1] * len(values)
    for i, value in enumerate(values):
        pos = bisect_right(tails, value)
        lengths[i] = pos + 1
        if pos > 0:
            previous[i] = tails_at[pos - 1]
        if pos == len(tails):
            tails.append(value)
            tails_at.append(i)
        else:
            tails[pos] = value
            tails_at[pos] = i
    return lengths, previous


def longest_monotonic_run(values: Sequence[int]) -> MonotonicRun:
    """
    最長の単調部分列を求める

    非減少と非増加の両方を patience sorting で求め、長い方を返す。
    同じ長さなら非減少を優先する（出力を決定的にするため）。

    Args:
        values: 整数列（重複可）

    Returns:
        MonotonicRun: 長さは必ず ⌈√n⌉ 以上

    Raises:
        EmptySequenceError: 空の列が渡された場合
    """
    if len(values) == 0:
        raise EmptySequenceError("空の列には単調部分列がありません")

    up = _nondecreasing_chain(values)
    # 非増加は符号を反転した列の非減少として求める
    down = _nondecreasing_chain([-v for v in values])

    if len(down) > len(up):
        return MonotonicRun(indices=tuple(down), directions=(Direction.NONINC,))
    return MonotonicRun(indices=tuple(up), directions=(Direction.NONDEC,))


def tie_break_perturb(values: Sequence[int]) -> list[Fraction]:
    """
    重複値を相異なる有理数に置き換える

    値 x が m 回現れるとき、j 回目の出現を x + j/(m+1) にする。
    ずらし幅は 1 未満なので、異なる値どうしの大小は変わらない。

    例:
        [2, 2, 2] -> [2+1/4, 2+2/4, 2+3/4]
        [1, 2, 1] -> [1+1/3, 2+1/2, 1+2/3]
    """
    if len(values) == 0:
        raise EmptySequenceError("空の列は変換できません")

    counts = Counter(values)
    seen: Counter = Counter()
    perturbed = []
    for value in values:
        seen[value] += 1
        perturbed.append(value + Fraction(seen[value], counts[value] + 1))
    return perturbed


def _as_delta(delta: Fraction | float | int) -> Fraction:
    """delta を Fraction に正規化し、(0, 1) に入っているか確認する"""
    fraction = Fraction(delta).limit_denominator(1000)
    if not 0 < fraction < 1:
        raise ParameterError(f"delta は 0 < delta < 1 でなければなりません: {delta}")
    return fraction


def ceil_power(n: int, exponent: Fraction) -> int:
    """
    ⌈n^exponent⌉ を整数演算だけで求める

    exponent = p/q のとき、m ≥ n^{p/q} ⇔ m^q ≥ n^p を使う。
    """
    if n <= 1:
        return n
    p, q = exponent.numerator, exponent.denominator
    target = n**p
    m = max(1, math.ceil(n ** float(exponent)))
    while m > 1 and (m - 1) ** q >= target:
        m -= 1
    while m**q < target:
        m += 1
    return m


def minimum_length(delta: Fraction) -> int:
    """n ≥ 2^{1/δ} を満たす最小の n（δ = p/q なら n^p ≥ 2^q）"""
    return ceil_power(2**delta.denominator, Fraction(1, delta.numerator))


def _peel(
    remaining: list[int], extract, exponent: Fraction
) -> tuple[list[MonotonicRun], bool]:
    """
    残りの添字から単調部分列を取り出し続ける共通ループ

    extract(remaining) は remaining の部分集合を表す MonotonicRun を返す。
    """
    runs: list[MonotonicRun] = []
    hypothesis_held = True
    while remaining:
        run = extract(remaining)
        if len(run) < ceil_power(len(remaining), exponent):
            hypothesis_held = False
        runs.append(run)
        taken = set(run.indices)
        remaining = [i for i in remaining if i not in taken]
    return runs, hypothesis_held


def greedy_partition(
    values: Sequence[int], delta: Fraction | float = DEFAULT_DELTA
) -> MonotonicPartition:
    """
    最長単調部分列を繰り返し取り除いて列を分割する

    各ステップで残り n_rem 個から長さ ⌈n_rem^δ⌉ 以上の部分列を取り出せれば、
    部分列の個数は d·n^{1-δ}/(1-δ)（d = 2(1-δ)+1）以下になる。
    この上界は n ≥ 2^{1/δ} で成り立つので、それより短い列は受け付けない。
    最長部分列は常に ⌈√n_rem⌉ 以上なので、δ ≤ 1/2 なら仮定は必ず成り立つ。
    δ > 1/2 では成り立たないこともあり、その場合は hypothesis_held が False になる。

    Args:
        values: 整数列
        delta: 0 < delta < 1 の有理数（既定値 1/2）

    Returns:
        MonotonicPartition

    Raises:
        ParameterError: delta が範囲外の場合、列の長さが 2^{1/δ} 未満の場合
    """
    fraction = _as_delta(delta)
    shortest = minimum_length(fraction)
    if len(values) < shortest:
        raise ParameterError(
            f"列の長さ {len(values)} が 2^(1/δ) 未満です（δ = {fraction} では {shortest} 以上）"
        )

    def extract(remaining: list[int]) -> MonotonicRun:
        run = longest_monotonic_run([values[i] for i in remaining])
        return MonotonicRun(
            indices=tuple(remaining[j] for j in run.indices), directions=run.directions
        )

    runs, held = _peel(list(range(len(values))), extract, fraction)
    return MonotonicPartition(
        runs=tuple(runs),
        source_length=len(values),
        delta=fraction,
        constant=2 * (1 - fraction) + 1,
        hypothesis_held=held,
    )


def tuple_arity(tuples: Sequence[Sequence[int]]) -> int:
    """
    k 組の列の次元 k を返す

    Raises:
        MalformedInputError: 次元がそろっていない、または 0 次元の組がある場合
    """
    if not tuples:
        return 0
    arity = len(tuples[0])
    if arity < 1:
        raise MalformedInputError("組の次元は 1 以上でなければなりません")
    for position, item in enumerate(tuples):
        if len(item) != arity:
            raise MalformedInputError(
                f"{position} 番目の組の次元が {len(item)} です（期待値 {arity}）"
            )
    return arity


def tuple_partition(
    tuples: Sequence[Sequence[int]], delta: Fraction | float = DEFAULT_DELTA
) -> MonotonicPartition:
    """
    k 組の列を、全次元で単調な部分列に分割する

    1 回の抽出は入れ子になっている:
    1 次元目で最長単調部分列を取り、その中で 2 次元目の最長単調部分列を取り、
    ... と k 次元目まで繰り返す。単調列の部分列は単調なので、
    最後に残った添字は全次元で単調になる。長さは n^{δ^k} 以上。

    Returns:
        MonotonicPartition: delta には実効指数 δ^k、constant には 2(1-δ^k)+1 が入る
    """
    fraction = _as_delta(delta)
    arity = tuple_arity(tuples)
    if arity == 0:
        return MonotonicPartition(runs=(), source_length=0, delta=fraction)

    effective = fraction**arity

    def extract(remaining: list[int]) -> MonotonicRun:
        candidates = remaining
        directions: list[Direction] = []
        for dim in range(arity):
            run = longest_monotonic_run([tuples[i][dim] for i in candidates])
            candidates = [candidates[j] for j in run.indices]
            directions.append(run.directions[0])
        # 後の次元で候補が減っても、前の次元の単調性は保たれる
        return MonotonicRun(indices=tuple(candidates), directions=tuple(directions))

    runs, held = _peel(list(range(len(tuples))), extract, effective)
    return MonotonicPartition(
        runs=tuple(runs),
        source_length=len(tuples),
        delta=effective,
        constant=2 * (1 - effective) + 1,
        hypothesis_held=held,
    )


def _ceil_sqrt(n: int) -> int:
    return 0 if n == 0 else math.isqrt(n - 1) + 1


def lemma_main_bound(n: int, distinct: int) -> int:
    """max{⌈√n⌉, ⌈√c + n/c − 2⌉}（c が平方数のときの保証長）"""
    root = math.isqrt(distinct)
    return max(_ceil_sqrt(n), math.ceil(root + Fraction(n, distinct) - 2))


def _preconditions_hold(n: int, distinct: int) -> bool:
    root = math.isqrt(distinct)
    return distinct >= 1 and root * root == distinct and n > distinct and (n - 1) % distinct == 0


def _earliest_run(window: list[int], values: Sequence[int], length: int) -> list[int] | None:
    """
    窓の中で、最後の要素の位置が最も早い長さ length の単調部分列を探す

    各要素で終わる最長鎖の長さを両方向で求め、最初に length に届いた要素で打ち切る。
    返り値は元の列への添字。
    """
    up_len, up_prev = _chain_lengths([values[i] for i in window])
    down_len, down_prev = _chain_lengths([-values[i] for i in window])
    for j in range(len(window)):
        for lengths, previous in ((up_len, up_prev), (down_len, down_prev)):
            if lengths[j] >= length:
                chain = []
                cursor = j
                while cursor != -1 and len(chain) < length:
                    chain.append(window[cursor])
                    cursor = previous[cursor]
                chain.reverse()
                return chain
    return None


def _construct(values: Sequence[int]) -> MonotonicRun:
    """
    n = kc+1、c が平方数の列に対する構成的手順

    先頭 c+1 要素の窓から「最も早く終わる長さ √c の単調部分列」を取り、
    その最後の要素（代表）を列から消す。これを n−c 回繰り返すと、
    鳩の巣原理である値 q の代表が k 回以上現れる。
    最初の代表 p の部分列 Q(p) に、残りの値 q の代表を後ろに連結すると単調になる。
    """
    distinct = len(set(values))
    root = math.isqrt(distinct)
    remaining = list(range(len(values)))
    representatives: list[tuple[int, list[int]]] = []

    for _ in range(len(values) - distinct):
        window = remaining[: distinct + 1]
        chain = _earliest_run(window, values, root)
        if chain is None:
            # c+1 個の窓には長さ √c の単調部分列が必ずある
            break
        representatives.append((chain[-1], chain))
        remaining.remove(chain[-1])

    if not representatives:
        return longest_monotonic_run(values)

    frequency = Counter(values[index] for index, _ in representatives)
    best_count = max(frequency.values())
    # 同数なら最初に現れた値を選ぶ
    q = next(values[i] for i, _ in representatives if frequency[values[i]] == best_count)
    members = sorted(i for i, _ in representatives if values[i] == q)
    p = members[0]
    chain = next(c for i, c in representatives if i == p)

    indices = chain + [i for i in members[1:] if i > p]
    head = [values[i] for i in chain]
    direction = Direction.NONINC if head and head[0] > head[-1] else Direction.NONDEC
    return MonotonicRun(indices=tuple(indices), directions=(direction,))


def lemma_main_extract(values: Sequence[int]) -> LemmaMainResult:
    """
    値の種類数 c を使って長い単調部分列を構成的に取り出す

    n = kc+1 で c が平方数のとき、長さ max{⌈√n⌉, ⌈√c + n/c − 2⌉} 以上の
    単調部分列を返す。構成より長い単調部分列があればそちらを返す。
    条件を満たさない場合は、条件を満たす最長の接頭辞で構成的手順を実行し、
    全体の最長単調部分列と比べて長い方を返す
    （preconditions_met が False になる）。

    Raises:
        EmptySequenceError: 空の列が渡された場合
    """
    if len(values) == 0:
        raise EmptySequenceError("空の列には単調部分列がありません")

    n = len(values)
    distinct = len(set(values))
    if _preconditions_hold(n, distinct):
        guaranteed = lemma_main_bound(n, distinct)
        run = _construct(values)
        source = "construction"
        # 構成の長さは √c + k − 1。最長単調部分列の方が長ければそちらを返す
        longest = longest_monotonic_run(values)
        if len(longest) > len(run):
            run, source = longest, "longest"
        return LemmaMainResult(
            run=run, preconditions_met=True, guaranteed_length=guaranteed, source=source
        )

    # 条件を満たす最長の接頭辞を探す
    prefix_distinct = []
    seen: set[int] = set()
    for value in values:
        seen.add(value)
        prefix_distinct.append(len(seen))
    candidate = None
    for m in range(n, 1, -1):
        if _preconditions_hold(m, prefix_distinct[m - 1]):
            candidate = _construct(values[:m])
            break

    longest = longest_monotonic_run(values)
    if candidate is not None and len(candidate) >= len(longest):
        run, source = candidate, "construction"
    else:
        run, source = longest, "longest"
    return LemmaMainResult(
        run=run,
        preconditions_met=False,
        guaranteed_length=_ceil_sqrt(n),
        source=source,
    )
