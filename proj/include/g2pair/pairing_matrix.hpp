#pragma once

// The 4x4 table of Tate-pairing logs over a symplectic basis.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "pairing.hpp"
#include "torsion.hpp"

namespace g2pair {

/// Runs body(0..count-1) on at most `threads` workers (0 = hardware).
/// The first exception thrown by any task is rethrown.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

/// Entries indexed by (1, 2, -1, -2). For j != -i, logs[i][j] is
/// log T(Q_i, Q_j); for the pairs (i, -i) it is log T(Q_i, Q_-i) T(Q_-i, Q_i).
/// `raw` keeps log T(Q_i, Q_j) for all sixteen pairs, self-pairings included.
template <class M>
struct PairingMatrix {
    Integer ell;
    unsigned long n = 0;
    FieldElem<M> zeta;
    LogMatrix logs{};
    LogMatrix raw{};

    Integer level() const { return ipow(ell, n); }
};

/// Position of -i in the (1, 2, -1, -2) order.
constexpr int partner_index(int i) { return (i + 2) % 4; }

/// log_zeta T_{ell^n}(P, Q).
template <class M>
Integer tate_log(const Curve<M>& C, const Divisor<M>& P, const Divisor<M>& Q, const Integer& ell, unsigned long n,
                 const FieldElem<M>& zeta, Rng& rng)
{
    const Integer m = ipow(ell, n);
    return dlog_prime_power(zeta, tate_reduced(C, P, Q, m, rng), ell, static_cast<int>(n));
}

template <class M>
PairingMatrix<M> pairing_matrix(const Curve<M>& C, const TorsionBasis<M>& basis, Rng& rng, unsigned threads = 0)
{
    if (!basis.symplectic)
        throw PairingError("pairing_matrix needs a symplectic basis");
    PairingMatrix<M> out;
    out.ell = basis.ell;
    out.n = basis.n;
    out.zeta = pairing_root(C, basis.ell, basis.n);
    const Integer m = basis.level();

    std::vector<Rng> streams;
    for (std::uint64_t k = 0; k < 16; ++k)
        streams.push_back(rng.split(k));
    parallel_for(16, threads, [&](std::size_t k) {
        const int i = static_cast<int>(k / 4), j = static_cast<int>(k % 4);
        out.raw[i][j] = tate_log(C, basis.points[i], basis.points[j], basis.ell, basis.n, out.zeta, streams[k]);
    });
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.logs[i][j] = j == partner_index(i) ? mod(out.raw[i][j] + out.raw[j][i], m) : out.raw[i][j];
    return out;
}

} // namespace g2pair
