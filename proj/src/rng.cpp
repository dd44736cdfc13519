#include "gnpn/rng.hpp"

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "gnpn/error.hpp"

namespace gnpn {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x676e706eU};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw Error(ErrorKind::InvalidArgument, "uniform: lo > hi");
  if (lo == hi) return lo;
  return boost::random::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw Error(ErrorKind::InvalidArgument, "normal: sd must be positive");
  return boost::random::normal_distribution<double>(mean, sd)(engine_);
}

unsigned RngStream::poisson(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "poisson: lambda must be positive");
  return boost::random::poisson_distribution<unsigned, double>(lambda)(engine_);
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return boost::random::bernoulli_distribution<double>(p)(engine_);
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "index: empty range");
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace gnpn
