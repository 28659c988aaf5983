#include "nlos/key_agreement.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

#include <boost/multiprecision/miller_rabin.hpp>
#include <openssl/evp.h>

#include "nlos/errors.hpp"

namespace nlos::keyagree {

namespace mp = boost::multiprecision;

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
  if (modulus < 2) throw DomainError("modulus must be >= 2");
  if (exponent < 0) throw DomainError("exponent must be >= 0");
  BigInt b = base % modulus;
  if (b < 0) b += modulus;
  BigInt result = 1;
  if (exponent == 0) return result;
  for (std::size_t i = mp::msb(exponent) + 1; i-- > 0;) {
    result = (result * result) % modulus;
    if (mp::bit_test(exponent, static_cast<unsigned>(i))) result = (result * b) % modulus;
  }
  return result;
}

BigInt mod_inverse(const BigInt& m, const BigInt& modulus) {
  if (modulus < 2) throw DomainError("modulus must be >= 2");
  BigInt r0 = modulus;
  BigInt r1 = m % modulus;
  if (r1 < 0) r1 += modulus;
  BigInt t0 = 0;
  BigInt t1 = 1;
  while (r1 != 0) {
    const BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    BigInt t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0 != 1) throw NotInvertible("value shares a factor with the modulus");
  if (t0 < 0) t0 += modulus;
  return t0;
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  std::mt19937 witnesses(0x5eed);
  return mp::miller_rabin_test(n, 25, witnesses);
}

PublicParams::PublicParams(BigInt n, BigInt g) : n_(std::move(n)), g_(std::move(g)) {
  if (!(g_ > 1 && g_ < n_)) throw DomainError("generator must satisfy 1 < g < n");
  if (!is_probable_prime(n_)) throw DomainError("modulus n is not prime");
}

PublicParams PublicParams::modp2048() {
  static const PublicParams group(
      BigInt("0xFFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74020BBEA63B139B2251"
             "4A08798E3404DDEF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245E485B576625E7EC6F44C"
             "42E9A637ED6B0BFF5CB6F406B7EDEE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007C"
             "B8A163BF0598DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB9ED52907"
             "7096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3BE39E772C180E86039B2783A2EC"
             "07A28FB5C55DF06F4C52C9DE2BCBF6955817183995497CEA956AE515D2261898FA051015728E5A8AAC"
             "AA68FFFFFFFFFFFFFFFF"),
      BigInt(2));
  return group;
}

bool PasswordDigest::consistent_with(const PublicParams& params) const {
  const BigInt order = params.order();
  if (m < 1 || m >= order || m_inv < 1 || m_inv >= order) return false;
  if (mp::gcd(m, order) != 1) return false;
  return (m * m_inv) % order == 1 % order;
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  return out;
}

BigInt password_hash_value(std::span<const std::uint8_t> password) {
  return from_bytes(sha256(password));
}

PasswordDigest digest_from_seed_value(const BigInt& m0, const PublicParams& params) {
  const BigInt order = params.order();
  BigInt m = m0 % order;
  if (m < 0) m += order;
  if (m == 0) m = 1;
  // Terminates: 1 is always coprime.
  while (mp::gcd(m, order) != 1) {
    ++m;
    if (m == order) m = 1;
  }
  BigInt inv = mod_inverse(m, order);
  return PasswordDigest{std::move(m), std::move(inv)};
}

PasswordDigest derive_digest(std::span<const std::uint8_t> password, const PublicParams& params) {
  if (password.empty()) throw DomainError("password must not be empty");
  return digest_from_seed_value(password_hash_value(password), params);
}

PasswordDigest derive_digest(std::string_view password, const PublicParams& params) {
  return derive_digest(
      std::span(reinterpret_cast<const std::uint8_t*>(password.data()), password.size()), params);
}

BigInt sample_exponent(const PublicParams& params, std::mt19937_64& rng) {
  if (params.n() < 5) throw DomainError("modulus too small to sample an exponent in [2, n-2]");
  const BigInt span_size = params.n() - 3;  // values 2..n-2
  const std::size_t bits = mp::msb(span_size) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t excess = words * 64 - bits;
  for (;;) {
    BigInt draw = 0;
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t w = rng();
      if (i == 0 && excess > 0) w >>= excess;
      draw = (draw << 64) | BigInt(w);
    }
    if (draw < span_size) return draw + 2;
  }
}

const char* to_string(Role role) noexcept {
  return role == Role::Initiator ? "initiator" : "responder";
}

const char* to_string(SessionState state) noexcept {
  switch (state) {
    case SessionState::Fresh: return "fresh";
    case SessionState::Sent: return "sent";
    case SessionState::Established: return "established";
  }
  return "?";
}

HandshakeSession::HandshakeSession(Role role, PublicParams params, PasswordDigest digest,
                                   BigInt secret_exponent)
    : role_(role), params_(std::move(params)), digest_(std::move(digest)),
      secret_(std::move(secret_exponent)) {
  if (secret_ < 1 || secret_ >= params_.order()) {
    throw DomainError("secret exponent must lie in [1, n-1)");
  }
  if (!digest_.consistent_with(params_)) {
    throw DomainError("password digest does not match the public parameters");
  }
}

BigInt HandshakeSession::make_public_value() {
  if (state_ != SessionState::Fresh) {
    throw StateError(std::string("make_public_value in state ") + to_string(state_));
  }
  BigInt value = mod_pow(params_.g(), secret_ * digest_.m, params_.n());
  state_ = SessionState::Sent;
  return value;
}

BigInt HandshakeSession::derive_shared_key(const BigInt& peer_value) {
  if (state_ != SessionState::Sent) {
    throw StateError(std::string("derive_shared_key in state ") + to_string(state_));
  }
  if (peer_value <= 0 || peer_value >= params_.n()) {
    throw ProtocolError("peer value outside (0, n)");
  }
  unblinded_ = mod_pow(peer_value, digest_.m_inv, params_.n());
  key_ = mod_pow(*unblinded_, secret_, params_.n());
  state_ = SessionState::Established;
  return *key_;
}

HandshakeResult run_handshake(const PasswordDigest& initiator_digest,
                              const PasswordDigest& responder_digest, const PublicParams& params,
                              const BigInt& a, const BigInt& b) {
  HandshakeSession alice(Role::Initiator, params, initiator_digest, a);
  HandshakeSession bob(Role::Responder, params, responder_digest, b);

  HandshakeResult result{0, 0, {}, initiator_digest, responder_digest};
  const BigInt k1 = alice.make_public_value();
  result.transcript.push_back({Role::Initiator, k1});
  const BigInt k2 = bob.make_public_value();
  result.transcript.push_back({Role::Responder, k2});

  result.key_responder = bob.derive_shared_key(k1);
  result.key_initiator = alice.derive_shared_key(k2);
  return result;
}

HandshakeResult run_handshake(std::string_view initiator_password,
                              std::string_view responder_password, const PublicParams& params,
                              const BigInt& a, const BigInt& b) {
  return run_handshake(derive_digest(initiator_password, params),
                       derive_digest(responder_password, params), params, a, b);
}

Bytes to_bytes(const BigInt& value) {
  if (value < 0) throw DomainError("cannot encode a negative integer");
  Bytes out;
  if (value == 0) return out;
  mp::export_bits(value, std::back_inserter(out), 8);
  return out;
}

BigInt from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt value = 0;
  if (!bytes.empty()) mp::import_bits(value, bytes.begin(), bytes.end(), 8);
  return value;
}

Bytes encode_message(const BigInt& value) {
  const Bytes body = to_bytes(value);
  if (body.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("message too long");
  }
  const auto len = static_cast<std::uint32_t>(body.size());
  Bytes out(4 + body.size());
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(len >> (24 - 8 * i));
  std::copy(body.begin(), body.end(), out.begin() + 4);
  return out;
}

BigInt decode_message(std::span<const std::uint8_t> wire, std::size_t& offset) {
  if (offset > wire.size() || wire.size() - offset < 4) {
    throw ProtocolError("truncated length prefix");
  }
  const auto* p = wire.data() + offset;
  const std::size_t len = (std::size_t{p[0]} << 24) | (std::size_t{p[1]} << 16) |
                          (std::size_t{p[2]} << 8) | std::size_t{p[3]};
  if (wire.size() - offset - 4 < len) throw ProtocolError("truncated message body");
  BigInt value = from_bytes(wire.subspan(offset + 4, len));
  offset += 4 + len;
  return value;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::string key_fingerprint(const BigInt& key) {
  const auto digest = sha256(to_bytes(key));
  return to_hex(std::span(digest).first(8));
}

}  // namespace nlos::keyagree
