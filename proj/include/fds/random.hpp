#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace fds {

enum class Role : std::uint8_t
{
    real = 0,
    synthetic = 1,
};

constexpr std::string_view to_string(Role role) noexcept { return role == Role::real ? "real" : "synthetic"; }

namespace detail {

// splitmix64 output function
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a; stable across platforms, unlike std::hash
constexpr std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/// Structured stream identifier. Components are hashed positionally, so
/// (1, 2) and (2, 1) name different streams.
class StreamPath
{
public:
    StreamPath() = default;
    StreamPath(std::initializer_list<std::uint64_t> parts) : parts_(parts) {}

    /// Path for one sampled set of one sweep cell.
    static StreamPath cell(std::string_view check, std::string_view variant, std::size_t grid_index,
                           std::size_t repeat, Role role)
    {
        return StreamPath{detail::fnv1a(check), detail::fnv1a(variant), grid_index, repeat,
                          static_cast<std::uint64_t>(role)};
    }

    StreamPath child(std::uint64_t part) const
    {
        StreamPath p = *this;
        p.parts_.push_back(part);
        return p;
    }

    StreamPath child(std::string_view part) const { return child(detail::fnv1a(part)); }

    std::vector<std::uint64_t> const& parts() const noexcept { return parts_; }

    friend bool operator==(StreamPath const&, StreamPath const&) = default;

private:
    std::vector<std::uint64_t> parts_;
};

/// Deterministic randomness keyed on (master seed, stream path).
///
/// Derivation is a pure function of its inputs, so a worker can rebuild any
/// stream from the pair alone; nothing mutable is shared between streams.
class RandomSource
{
public:
    using engine_type = std::mt19937_64;

    explicit RandomSource(std::uint64_t seed, StreamPath path = {}) : seed_(seed), path_(std::move(path))
    {
        key_ = detail::mix64(seed_);
        std::uint64_t position = 0;
        for (std::uint64_t part : path_.parts()) {
            ++position;
            key_ = detail::mix64(key_ ^ detail::mix64(part + 0x632be59bd9b4e019ULL * position));
        }
    }

    std::uint64_t seed() const noexcept { return seed_; }
    StreamPath const& path() const noexcept { return path_; }
    std::uint64_t key() const noexcept { return key_; }

    /// Fresh engine positioned at the start of this stream.
    engine_type engine() const
    {
        std::seed_seq seq{static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32),
                          static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(path_.parts().size())};
        return engine_type(seq);
    }

private:
    std::uint64_t seed_;
    StreamPath path_;
    std::uint64_t key_;
};

/// Child source whose path is `path` appended to the master's path.
inline RandomSource derive_stream(RandomSource const& master, StreamPath const& path)
{
    StreamPath joined = master.path();
    for (std::uint64_t part : path.parts()) joined = joined.child(part);
    return RandomSource(master.seed(), std::move(joined));
}

} // namespace fds
