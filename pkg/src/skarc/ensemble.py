"""Ensembles of distinct synthesized words for one target rotation.

Member 0 is the plain synthesis of ``theta``. Every further attempt ``k`` draws
from its own stream ``SeedSequence(seed, spawn_key=(k,))``: first an angle
jitter in ``[-2^-(b+1), 2^-(b+1)]``, then the randomized nearest-neighbour
choices of the synthesizer. Attempts are accepted in index order, so the
result does not depend on how attempts are scheduled.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EnsembleShortfallError, SynthesisError
from .gateword import is_canonical, validate, word_matrix
from .su2 import op_distance, rz
from .synthesis import DEFAULT_MAX_DEPTH, DEFAULT_MAX_H, build_base_net, synthesize_rz

ATTEMPT_BUDGET_FACTOR = 50
_CHUNK = 16


@dataclass
class Ensemble:
    theta: float
    b: int
    seed: int
    words: list
    distances: list
    jitters: list = field(default_factory=list)
    streams: list = field(default_factory=list)
    max_h: int = DEFAULT_MAX_H
    max_depth: int = DEFAULT_MAX_DEPTH

    @property
    def r(self):
        return len(self.words)

    def to_dict(self):
        return {
            "theta": self.theta,
            "b": self.b,
            "r": self.r,
            "seed": self.seed,
            "words": list(self.words),
            "distances": [float(d) for d in self.distances],
            "jitters": [float(j) for j in self.jitters],
            "streams": list(self.streams),
            "max_h": self.max_h,
            "max_depth": self.max_depth,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            words = [validate(w) for w in data["words"]]
            ens = cls(
                theta=float(data["theta"]),
                b=int(data["b"]),
                seed=int(data["seed"]),
                words=words,
                distances=[float(d) for d in data["distances"]],
                jitters=[float(j) for j in data.get("jitters", [])],
                streams=[int(s) for s in data.get("streams", [])],
                max_h=int(data.get("max_h", DEFAULT_MAX_H)),
                max_depth=int(data.get("max_depth", DEFAULT_MAX_DEPTH)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed ensemble data: {exc}") from exc
        if "r" in data and int(data["r"]) != len(words):
            raise DomainError(f"ensemble declares r={data['r']} but lists {len(words)} words")
        if len(ens.distances) != len(words):
            raise DomainError("ensemble words and distances differ in length")
        return ens


def save_ensemble(ens, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ens.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_ensemble(path):
    with open(path, encoding="utf-8") as fh:
        return Ensemble.from_dict(json.load(fh))


def attempt_rng(seed, k):
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(k),)))


def _attempt(theta, b, seed, k, max_h, max_depth):
    """Run jittered attempt ``k``; returns ``(jitter, word)`` or ``(jitter, None)`` on failure."""
    rng = attempt_rng(seed, k)
    half = 2.0 ** -(b + 1)
    jitter = float(rng.uniform(-half, half))
    try:
        res = synthesize_rz(theta + jitter, b + 1, max_h=max_h, max_depth=max_depth,
                            jitter_rng=rng, net=build_base_net(max_h))
    except SynthesisError:
        return jitter, None
    return jitter, res.word


def _attempt_chunk(args):
    theta, b, seed, ks, max_h, max_depth = args
    return [_attempt(theta, b, seed, k, max_h, max_depth) for k in ks]


def thread_count(threads=None):
    if threads is None:
        raw = os.environ.get("SKARC_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"SKARC_THREADS must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be positive, got {threads}")
    return threads


def generate_ensemble(theta, b, r, seed, max_h=DEFAULT_MAX_H, max_depth=DEFAULT_MAX_DEPTH,
                      threads=None):
    """Generate ``r`` distinct words, each within ``2**-b`` of ``rz(theta)``."""
    if r < 1:
        raise DomainError(f"ensemble size must be >= 1, got {r}")
    if b < 0:
        raise DomainError(f"bits of precision must be >= 0, got {b}")
    threads = thread_count(threads)
    eps = 2.0 ** -b
    target = rz(theta)

    nominal = synthesize_rz(theta, b + 1, max_h=max_h, max_depth=max_depth)
    words, dists, jitters, streams = [nominal.word], [], [0.0], [0]
    dists.append(op_distance(word_matrix(nominal.word), target))
    seen = {nominal.word}

    budget = ATTEMPT_BUDGET_FACTOR * r
    k = 1
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        while len(words) < r and k <= budget:
            width = _CHUNK * threads
            ks = list(range(k, min(budget, k + width - 1) + 1))
            chunks = [ks[i:i + _CHUNK] for i in range(0, len(ks), _CHUNK)]
            args = [(theta, b, seed, c, max_h, max_depth) for c in chunks]
            results = pool.map(_attempt_chunk, args) if pool else map(_attempt_chunk, args)
            for chunk, outcome in zip(chunks, results):
                for kk, (jitter, word) in zip(chunk, outcome):
                    if len(words) >= r or word is None or word in seen:
                        continue
                    d = op_distance(word_matrix(word), target)
                    if d > eps:
                        continue
                    seen.add(word)
                    words.append(word)
                    dists.append(d)
                    jitters.append(jitter)
                    streams.append(kk)
            k = ks[-1] + 1
    finally:
        if pool:
            pool.shutdown()

    if len(words) < r:
        raise EnsembleShortfallError(
            f"found only {len(words)} of {r} unique sequences in {budget} attempts",
            found=len(words), requested=r,
        )
    return Ensemble(theta=float(theta), b=int(b), seed=int(seed), words=words,
                    distances=dists, jitters=jitters, streams=streams,
                    max_h=max_h, max_depth=max_depth)


@dataclass
class Violation:
    index: int
    reasons: list


@dataclass
class VerificationReport:
    distances: list
    violations: list

    @property
    def ok(self):
        return not self.violations


def verify_ensemble(ens):
    """Recompute every member from scratch and list members breaking the ensemble invariants."""
    eps = 2.0 ** -ens.b
    target = rz(ens.theta)
    first_seen = {}
    problems = {}
    distances = []
    for i, word in enumerate(ens.words):
        reasons = []
        if not isinstance(word, str) or set(word) - set("HST"):
            distances.append(float("nan"))
            problems[i] = ["invalid symbols"]
            continue
        d = op_distance(word_matrix(word), target)
        distances.append(d)
        if not is_canonical(word):
            reasons.append("not canonical")
        if d > eps:
            reasons.append(f"distance {d:.3g} exceeds 2^-{ens.b}")
        if i < len(ens.distances) and abs(d - ens.distances[i]) > 1e-12:
            reasons.append("stored distance does not match")
        if word in first_seen:
            reasons.append(f"duplicate of member {first_seen[word]}")
        else:
            first_seen[word] = i
        if reasons:
            problems[i] = reasons
    if ens.words:
        nominal = synthesize_rz(ens.theta, ens.b + 1, max_h=ens.max_h, max_depth=ens.max_depth)
        if ens.words[0] != nominal.word:
            problems.setdefault(0, []).append("member 0 is not the zero-jitter synthesis")
    if len(ens.distances) != len(ens.words):
        problems.setdefault(-1, []).append("distances and words differ in length")
    violations = [Violation(i, problems[i]) for i in sorted(problems)]
    return VerificationReport(distances=distances, violations=violations)
