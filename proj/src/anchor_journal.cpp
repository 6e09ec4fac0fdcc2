#include "sdoc/anchor.hpp"
#include "sdoc/error.hpp"
#include "sdoc/hex.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace sdoc {

namespace {

[[noreturn]] void io_failure(const std::filesystem::path& p, const std::string& what)
{
    throw Error(Errc::anchor_io, "journal " + p.string() + ": " + what);
}

class FileLock {
public:
    FileLock(int fd, int op) : fd_(fd)
    {
        while (::flock(fd_, op) != 0)
            if (errno != EINTR)
                throw Error(Errc::anchor_io, std::string("journal lock failed: ") + std::strerror(errno));
    }
    ~FileLock() { ::flock(fd_, LOCK_UN); }

    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_;
};

} // namespace

JournalAnchor::JournalAnchor(std::filesystem::path path) : path_(std::move(path))
{
    fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0)
        io_failure(path_, std::strerror(errno));
    try {
        FileLock lock(fd_, LOCK_SH);
        refresh_locked();
    } catch (...) {
        ::close(fd_);
        throw;
    }
}

JournalAnchor::~JournalAnchor()
{
    if (fd_ >= 0)
        ::close(fd_);
}

// Indexes complete records appended since the last call. Callers hold the
// file lock and an exclusive (or upgraded) in-process lock.
void JournalAnchor::refresh_locked() const
{
    struct stat st;
    if (::fstat(fd_, &st) != 0)
        io_failure(path_, std::strerror(errno));
    const auto size = static_cast<std::uint64_t>(st.st_size);
    if (size < consumed_)
        io_failure(path_, "journal shrank; it is append-only");
    if (size == consumed_)
        return;

    std::string buf(size - consumed_, '\0');
    std::size_t got = 0;
    while (got < buf.size()) {
        ssize_t r = ::pread(fd_, buf.data() + got, buf.size() - got, static_cast<off_t>(consumed_ + got));
        if (r < 0 && errno == EINTR)
            continue;
        if (r <= 0)
            io_failure(path_, "short read");
        got += static_cast<std::size_t>(r);
    }

    std::size_t pos = 0;
    while (true) {
        auto nl = buf.find('\n', pos);
        if (nl == std::string::npos) {
            if (pos != buf.size())
                io_failure(path_, "truncated record at byte " + std::to_string(consumed_ + pos));
            break;
        }
        std::string_view line(buf.data() + pos, nl - pos);
        const auto where = " at byte " + std::to_string(consumed_ + pos);
        if (line.size() < 66 || line[64] != ' ')
            io_failure(path_, "malformed record" + where);
        auto digest = Digest::from_hex(line.substr(0, 64));
        if (!digest || !is_lower_hex(line.substr(0, 64)))
            io_failure(path_, "malformed digest" + where);
        std::uint64_t seq = 0;
        auto num = line.substr(65);
        auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), seq);
        if (ec != std::errc() || end != num.data() + num.size() || num.front() == '0')
            io_failure(path_, "malformed sequence number" + where);
        if (seq != last_seq_ + 1)
            io_failure(path_, "sequence numbers must increase by one" + where);
        if (!index_.emplace(*digest, seq).second)
            io_failure(path_, "digest recorded twice" + where);
        last_seq_ = seq;
        pos = nl + 1;
    }
    consumed_ = size;
}

bool JournalAnchor::store(const Digest& digest)
{
    std::unique_lock guard(mutex_);
    FileLock lock(fd_, LOCK_EX);
    refresh_locked();
    if (index_.count(digest))
        return true;

    const std::uint64_t seq = last_seq_ + 1;
    const std::string line = digest.hex() + " " + std::to_string(seq) + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
        ssize_t w = ::write(fd_, line.data() + written, line.size() - written);
        if (w < 0 && errno == EINTR)
            continue;
        if (w <= 0)
            io_failure(path_, std::string("append failed: ") + std::strerror(errno));
        written += static_cast<std::size_t>(w);
    }
    if (::fsync(fd_) != 0)
        io_failure(path_, std::string("fsync failed: ") + std::strerror(errno));

    index_.emplace(digest, seq);
    last_seq_ = seq;
    consumed_ += line.size();
    return false;
}

std::uint64_t JournalAnchor::get_stored(const Digest& digest) const
{
    {
        std::shared_lock guard(mutex_);
        if (auto it = index_.find(digest); it != index_.end())
            return it->second;
    }
    // Miss: another process may have appended it.
    std::unique_lock guard(mutex_);
    FileLock lock(fd_, LOCK_SH);
    refresh_locked();
    auto it = index_.find(digest);
    return it == index_.end() ? 0 : it->second;
}

AnchorSpec JournalAnchor::describe() const
{
    return AnchorSpec{std::string(subsystem_local), "local", "journal", path_.filename().string(), 0};
}

std::size_t JournalAnchor::size() const
{
    std::shared_lock guard(mutex_);
    return index_.size();
}

bool is_url(std::string_view locator) noexcept
{
    return locator.starts_with("http://") || locator.starts_with("https://");
}

std::unique_ptr<Anchor> open_anchor(std::string_view locator, std::string_view contract_address,
                                    std::string_view network)
{
    if (!is_url(locator))
        return std::make_unique<JournalAnchor>(std::filesystem::path(locator));
    EvmConfig cfg;
    cfg.url = std::string(locator);
    cfg.contract_address = std::string(contract_address);
    if (!network.empty())
        cfg.network = std::string(network);
    if (const char* key = std::getenv("ANCHOR_PRIVKEY"); key && *key)
        cfg.private_key_hex = std::string(key);
    return std::make_unique<EvmAnchor>(std::move(cfg));
}

} // namespace sdoc
