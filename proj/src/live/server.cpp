#include "spg/live/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <deque>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

namespace spg::live {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

std::uint64_t derive_seed(std::uint64_t base, const std::string& session_id)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : session_id) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return base ^ h;
}

class Connection;

class SessionHost : public std::enable_shared_from_this<SessionHost> {
public:
    SessionHost(asio::io_context& ioc, Server::Impl& owner, std::string id, SessionOptions opts)
        : strand_(asio::make_strand(ioc)), timer_(strand_), owner_(owner),
          session_(std::move(id), std::move(opts))
    {
    }

    const std::string& id() const { return session_.id(); }

    void start()
    {
        asio::post(strand_, [self = shared_from_this()] {
            self->last_active_ = Clock::now();
            self->next_tick_ = self->last_active_ + self->session_.options().tick;
            self->arm();
        });
    }

    void stop()
    {
        asio::post(strand_, [self = shared_from_this()] {
            self->stopped_ = true;
            self->timer_.cancel();
        });
    }

    void join(const std::shared_ptr<Connection>& conn, ClientId client, Role role);
    void deliver(ClientId client, Message m);
    void leave(ClientId client);

    template <class Fn>
    void run_sync(Fn&& fn)
    {
        std::promise<void> done;
        asio::post(strand_, [&] {
            fn(session_);
            done.set_value();
        });
        done.get_future().wait();
    }

private:
    void arm()
    {
        timer_.expires_at(next_tick_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (!ec)
                self->on_tick();
        });
    }

    void on_tick();
    void dispatch(std::vector<Outbound> out);

    asio::strand<asio::io_context::executor_type> strand_;
    asio::steady_timer timer_;
    Server::Impl& owner_;
    Session session_;
    std::map<ClientId, std::weak_ptr<Connection>> conns_;
    Clock::time_point next_tick_;
    Clock::time_point last_active_;
    bool stopped_ = false;
};

struct Server::Impl {
    explicit Impl(ServerOptions o) : opts(std::move(o)), acceptor(ioc) {}

    ServerOptions opts;
    asio::io_context ioc;
    tcp::acceptor acceptor;
    std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
    std::vector<std::thread> threads;
    std::atomic<ClientId> next_client{1};

    mutable std::mutex mu;
    std::map<std::string, std::shared_ptr<SessionHost>> sessions;
    std::condition_variable stopped_cv;
    bool stopped = false;

    std::shared_ptr<SessionHost> create(const std::string& id, SessionOptions so)
    {
        std::lock_guard lock(mu);
        if (sessions.contains(id))
            throw InvalidInput("session '" + id + "' already exists");
        if (sessions.size() >= opts.max_sessions)
            throw InvalidInput("session limit of " + std::to_string(opts.max_sessions) +
                               " reached");
        auto host = std::make_shared<SessionHost>(ioc, *this, id, std::move(so));
        sessions.emplace(id, host);
        host->start();
        return host;
    }

    std::shared_ptr<SessionHost> find(const std::string& id) const
    {
        std::lock_guard lock(mu);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    /// Existing session, or a new one from the defaults template.
    std::shared_ptr<SessionHost> find_or_create(const std::string& id)
    {
        if (auto host = find(id))
            return host;
        if (!opts.create_on_hello)
            throw InvalidInput("no session '" + id + "'");
        SessionOptions so = opts.defaults;
        so.config.seed = derive_seed(opts.defaults.config.seed, id);
        so.assign_seed = derive_seed(opts.defaults.assign_seed, id);
        try {
            return create(id, std::move(so));
        } catch (const InvalidInput&) {
            if (auto host = find(id)) // created concurrently
                return host;
            throw;
        }
    }

    void remove(const std::string& id)
    {
        std::lock_guard lock(mu);
        sessions.erase(id);
    }

    void accept();
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket&& socket, Server::Impl& owner, ClientId id)
        : ws_(std::move(socket)), owner_(owner), id_(id)
    {
    }

    void start()
    {
        asio::dispatch(ws_.get_executor(), [self = shared_from_this()] {
            self->ws_.set_option(
                websocket::stream_base::timeout::suggested(beast::role_type::server));
            self->ws_.async_accept([self](beast::error_code ec) {
                if (ec)
                    return self->finish();
                self->read();
            });
        });
    }

    void send(std::string text)
    {
        asio::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
            if (self->closed_)
                return;
            self->outbox_.push_back(std::move(text));
            if (self->outbox_.size() == 1)
                self->write();
        });
    }

private:
    void read()
    {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec)
                return self->finish();
            auto text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->on_frame(text);
            self->read();
        });
    }

    void on_frame(const std::string& text)
    {
        Message msg;
        try {
            msg = decode(text);
        } catch (const ProtocolError& e) {
            return send(encode(Error{"bad_frame", e.what()}));
        }
        if (!host_) {
            const auto* hello = std::get_if<Hello>(&msg);
            if (!hello)
                return send(encode(Error{"not_joined", "send hello first"}));
            try {
                host_ = owner_.find_or_create(hello->session);
            } catch (const InvalidInput& e) {
                return send(encode(Error{"refused", e.what()}));
            }
            host_->join(shared_from_this(), id_, hello->role);
            return;
        }
        if (std::holds_alternative<Hello>(msg))
            return send(encode(Error{"already_joined", "connection already in a session"}));
        host_->deliver(id_, std::move(msg));
    }

    void write()
    {
        ws_.text(true);
        ws_.async_write(asio::buffer(outbox_.front()),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            if (ec)
                                return self->finish();
                            self->outbox_.pop_front();
                            if (!self->outbox_.empty())
                                self->write();
                        });
    }

    void finish()
    {
        if (closed_)
            return;
        closed_ = true;
        outbox_.clear();
        if (host_)
            host_->leave(id_);
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::string> outbox_;
    Server::Impl& owner_;
    ClientId id_;
    std::shared_ptr<SessionHost> host_;
    bool closed_ = false;
};

void SessionHost::join(const std::shared_ptr<Connection>& conn, ClientId client, Role role)
{
    asio::post(strand_, [self = shared_from_this(), weak = std::weak_ptr(conn), client, role] {
        if (self->stopped_) {
            if (auto c = weak.lock())
                c->send(encode(Error{"closed", "session has ended"}));
            return;
        }
        self->conns_[client] = weak;
        self->dispatch(self->session_.join(client, role));
        if (!self->session_.has_client(client))
            self->conns_.erase(client);
        self->last_active_ = Clock::now();
    });
}

void SessionHost::deliver(ClientId client, Message m)
{
    asio::post(strand_, [self = shared_from_this(), client, m = std::move(m)] {
        if (!self->stopped_)
            self->dispatch(self->session_.handle(client, m));
    });
}

void SessionHost::leave(ClientId client)
{
    asio::post(strand_, [self = shared_from_this(), client] {
        self->conns_.erase(client);
        self->dispatch(self->session_.leave(client));
        self->last_active_ = Clock::now();
    });
}

void SessionHost::on_tick()
{
    if (stopped_)
        return;
    dispatch(session_.tick());

    const auto now = Clock::now();
    if (session_.client_count() == 0 && now - last_active_ >= session_.options().idle_timeout) {
        stopped_ = true;
        owner_.remove(session_.id());
        return;
    }
    // Fixed-rate schedule; after a stall, resume from now rather than bursting.
    next_tick_ += session_.options().tick;
    if (next_tick_ < now)
        next_tick_ = now;
    arm();
}

void SessionHost::dispatch(std::vector<Outbound> out)
{
    for (auto& o : out) {
        const auto text = encode(o.message);
        if (o.to) {
            if (auto it = conns_.find(*o.to); it != conns_.end())
                if (auto c = it->second.lock())
                    c->send(text);
        } else {
            for (auto& [id, weak] : conns_)
                if (auto c = weak.lock())
                    c->send(text);
        }
    }
}

void Server::Impl::accept()
{
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec == asio::error::operation_aborted)
                return;
            std::cerr << "accept: " << ec.message() << "\n";
        } else {
            std::make_shared<Connection>(std::move(socket), *this, next_client++)->start();
        }
        if (acceptor.is_open())
            accept();
    });
}

Server::Server(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

Server::~Server() { stop(); }

void Server::start()
{
    auto& im = *impl_;
    const auto endpoint = tcp::endpoint(asio::ip::make_address(im.opts.address), im.opts.port);
    im.acceptor.open(endpoint.protocol());
    im.acceptor.set_option(asio::socket_base::reuse_address(true));
    im.acceptor.bind(endpoint);
    im.acceptor.listen(asio::socket_base::max_listen_connections);
    im.accept();
    im.work.emplace(im.ioc.get_executor());
    const unsigned n = std::max(1u, im.opts.threads);
    for (unsigned i = 0; i < n; ++i)
        im.threads.emplace_back([&im] { im.ioc.run(); });
}

void Server::wait()
{
    std::unique_lock lock(impl_->mu);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void Server::stop()
{
    auto& im = *impl_;
    {
        std::lock_guard lock(im.mu);
        if (im.stopped)
            return;
        im.stopped = true;
        for (auto& [id, host] : im.sessions)
            host->stop();
        im.sessions.clear();
    }
    asio::post(im.ioc, [&im] {
        beast::error_code ec;
        im.acceptor.close(ec);
    });
    im.work.reset();
    im.ioc.stop();
    for (auto& t : im.threads)
        if (t.joinable())
            t.join();
    im.threads.clear();
    im.stopped_cv.notify_all();
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

std::string Server::host_session(const std::string& id, SessionOptions opts)
{
    return impl_->create(id, std::move(opts))->id();
}

std::vector<std::string> Server::session_ids() const
{
    std::lock_guard lock(impl_->mu);
    std::vector<std::string> ids;
    for (const auto& [id, host] : impl_->sessions)
        ids.push_back(id);
    return ids;
}

bool Server::inspect(const std::string& id, const std::function<void(const Session&)>& fn)
{
    auto host = impl_->find(id);
    if (!host)
        return false;
    host->run_sync([&](const Session& s) { fn(s); });
    return true;
}

} // namespace spg::live
