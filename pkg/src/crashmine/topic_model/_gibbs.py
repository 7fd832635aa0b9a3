"""Compiled inner loops of the collapsed Gibbs sampler."""
from numba import njit

from ._rng import next_double


@njit(cache=True)
def _draw(p, total, state):
    # inverse CDF over the running sums in p[:K]
    u = next_double(state) * total
    K = p.shape[0]
    t = 0
    while t < K - 1 and p[t] <= u:
        t += 1
    return t


@njit(cache=True)
def init_assignments(words, doc_of, z, ndk, nkw, nk, state):
    K = nk.shape[0]
    for i in range(words.shape[0]):
        t = int(next_double(state) * K)
        z[i] = t
        ndk[doc_of[i], t] += 1
        nkw[t, words[i]] += 1
        nk[t] += 1


@njit(cache=True)
def gibbs_sweep(words, doc_of, z, ndk, nkw, nk, alpha, beta, vbeta, state, p):
    """One full sweep over every token, in corpus order."""
    K = nk.shape[0]
    for i in range(words.shape[0]):
        w = words[i]
        d = doc_of[i]
        t = z[i]
        ndk[d, t] -= 1
        nkw[t, w] -= 1
        nk[t] -= 1
        total = 0.0
        for k in range(K):
            total += (ndk[d, k] + alpha) * (nkw[k, w] + beta) / (nk[k] + vbeta)
            p[k] = total
        t = _draw(p, total, state)
        z[i] = t
        ndk[d, t] += 1
        nkw[t, w] += 1
        nk[t] += 1


@njit(cache=True)
def init_foldin(words, doc_of, z, ndk, state):
    K = ndk.shape[1]
    for i in range(words.shape[0]):
        t = int(next_double(state) * K)
        z[i] = t
        ndk[doc_of[i], t] += 1


@njit(cache=True)
def foldin_sweep(words, doc_of, z, ndk, phi, alpha, state, p):
    """Resample topics of unseen documents against a fixed topic-word matrix."""
    K = ndk.shape[1]
    for i in range(words.shape[0]):
        w = words[i]
        d = doc_of[i]
        ndk[d, z[i]] -= 1
        total = 0.0
        for k in range(K):
            total += (ndk[d, k] + alpha) * phi[k, w]
            p[k] = total
        t = _draw(p, total, state)
        z[i] = t
        ndk[d, t] += 1
