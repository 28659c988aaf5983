#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Password-authenticated Diffie-Hellman. Both parties derive an exponent M
// from the shared password, coprime to n-1, and blind their exchange value
// with it: K = g^(x*M) mod n. The receiver strips the blinding with
// M^-1 mod (n-1) before raising to its own secret.
namespace nlos::keyagree {

using BigInt = boost::multiprecision::cpp_int;
using Bytes = std::vector<std::uint8_t>;

/// Name of the hash used for password digests and key fingerprints.
inline constexpr std::string_view kHashName = "sha256";

/// base^exponent mod modulus by left-to-right square-and-multiply.
/// Result lies in [0, modulus). DomainError if modulus < 2 or exponent < 0.
BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

/// Inverse of m modulo `modulus` in [1, modulus), by extended Euclid.
/// NotInvertible when gcd(m, modulus) != 1.
BigInt mod_inverse(const BigInt& m, const BigInt& modulus);

/// Miller-Rabin with a fixed-seed witness generator, so results are
/// reproducible.
bool is_probable_prime(const BigInt& n);

class PublicParams {
 public:
  /// Validates that n is (probably) prime and 1 < g < n.
  PublicParams(BigInt n, BigInt g);

  /// 2048-bit MODP group 14 (RFC 3526), generator 2.
  static PublicParams modp2048();

  const BigInt& n() const noexcept { return n_; }
  const BigInt& g() const noexcept { return g_; }
  BigInt order() const { return n_ - 1; }

  /// Parameters small enough that keys may be printed in full.
  bool demo_scale() const { return boost::multiprecision::msb(n_) < 64; }

 private:
  BigInt n_;
  BigInt g_;
};

struct PasswordDigest {
  BigInt m;
  BigInt m_inv;

  /// Checks gcd(M, n-1) = 1, M*M_inv = 1 mod (n-1) and both in [1, n-1).
  bool consistent_with(const PublicParams& params) const;
};

/// Big-endian integer decoding of SHA-256(password).
BigInt password_hash_value(std::span<const std::uint8_t> password);

/// Digest from a starting value: M0 is reduced into [1, n-1) and advanced
/// (wrapping) to the first value coprime with n-1.
PasswordDigest digest_from_seed_value(const BigInt& m0, const PublicParams& params);

/// Deterministic password digest. DomainError for an empty password.
PasswordDigest derive_digest(std::span<const std::uint8_t> password, const PublicParams& params);
PasswordDigest derive_digest(std::string_view password, const PublicParams& params);

/// Uniform exponent in [2, n-2]. DomainError if n < 5.
BigInt sample_exponent(const PublicParams& params, std::mt19937_64& rng);

enum class Role { Initiator, Responder };
enum class SessionState { Fresh, Sent, Established };

const char* to_string(Role role) noexcept;
const char* to_string(SessionState state) noexcept;

/// One side of the two-message exchange. Single-owner state machine:
/// Fresh -> Sent -> Established.
class HandshakeSession {
 public:
  /// DomainError unless 1 <= secret_exponent < n-1.
  HandshakeSession(Role role, PublicParams params, PasswordDigest digest, BigInt secret_exponent);

  Role role() const noexcept { return role_; }
  SessionState state() const noexcept { return state_; }
  const PublicParams& params() const noexcept { return params_; }
  const PasswordDigest& digest() const noexcept { return digest_; }

  /// g^(secret * M) mod n. StateError unless Fresh.
  BigInt make_public_value();

  /// Unblinds the peer value (peer^M_inv mod n) and raises it to the
  /// secret. StateError unless Sent; ProtocolError unless 0 < peer < n.
  BigInt derive_shared_key(const BigInt& peer_value);

  /// The unblinded peer value (R on the initiator, X on the responder).
  const std::optional<BigInt>& unblinded_peer() const noexcept { return unblinded_; }
  const std::optional<BigInt>& shared_key() const noexcept { return key_; }

 private:
  Role role_;
  PublicParams params_;
  PasswordDigest digest_;
  BigInt secret_;
  SessionState state_ = SessionState::Fresh;
  std::optional<BigInt> unblinded_;
  std::optional<BigInt> key_;
};

struct HandshakeMessage {
  Role sender;
  BigInt value;
};

struct HandshakeResult {
  BigInt key_initiator;
  BigInt key_responder;
  std::vector<HandshakeMessage> transcript;  ///< K1 then K2
  PasswordDigest digest_initiator;
  PasswordDigest digest_responder;

  bool keys_match() const { return key_initiator == key_responder; }
};

HandshakeResult run_handshake(const PasswordDigest& initiator_digest,
                              const PasswordDigest& responder_digest, const PublicParams& params,
                              const BigInt& a, const BigInt& b);

HandshakeResult run_handshake(std::string_view initiator_password,
                              std::string_view responder_password, const PublicParams& params,
                              const BigInt& a, const BigInt& b);

/// Unsigned big-endian magnitude with no leading zeros (zero encodes empty).
Bytes to_bytes(const BigInt& value);
BigInt from_bytes(std::span<const std::uint8_t> bytes);

/// Wire form: 4-byte big-endian length followed by the magnitude.
Bytes encode_message(const BigInt& value);

/// Decodes the message starting at `wire[offset]` and advances `offset`
/// past it. ProtocolError on truncation.
BigInt decode_message(std::span<const std::uint8_t> wire, std::size_t& offset);

/// SHA-256 of arbitrary bytes.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

/// First 8 bytes of SHA-256 over the key's magnitude, as 16 hex digits.
std::string key_fingerprint(const BigInt& key);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace nlos::keyagree
