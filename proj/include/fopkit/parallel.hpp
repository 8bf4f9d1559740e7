#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace fopkit {

/// Smallest i in [0, count) with pred(i), scanning chunks on `workers`
/// threads. The answer never depends on the worker count: chunks above the
/// best hit so far are skipped, chunks below it always finish. An exception
/// thrown by pred at index j is rethrown iff no hit below j exists.
std::optional<std::uint64_t> first_index(std::uint64_t count, unsigned workers,
                                         const std::function<bool(std::uint64_t)>& pred,
                                         std::uint64_t chunk = 1024);

/// Runs fn(i) for every i in [0, count); fn must only write to its own slot.
void for_each_index(std::uint64_t count, unsigned workers,
                    const std::function<void(std::uint64_t)>& fn, std::uint64_t chunk = 256);

}  // namespace fopkit
