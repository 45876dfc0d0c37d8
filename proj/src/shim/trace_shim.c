/* Copyright 2026 The depsentry Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* LD_PRELOAD interposer that records file accesses of a make invocation
 * and all of its children into $DEPSENTRY_TRACE_OUT, one record per line:
 *
 *   seq<TAB>pid<TAB>ppid<TAB>op<TAB>path[<TAB>path2]
 *
 * Only successful calls are recorded. Relative paths are resolved against
 * the calling process's working directory textually; symlinks are left
 * unresolved on purpose so that links and their targets stay distinct.
 * The log file is opened with O_APPEND and each record is emitted with a
 * single write(), which keeps concurrent writers line-atomic in practice.
 */

#define _GNU_SOURCE
#include <dlfcn.h>
#include <errno.h>
#include <fcntl.h>
#include <limits.h>
#include <stdarg.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>
#include <sys/syscall.h>
#include <sys/types.h>
#include <unistd.h>

typedef int (*open_fn)(const char*, int, ...);
typedef int (*openat_fn)(int, const char*, int, ...);
typedef int (*creat_fn)(const char*, mode_t);
typedef FILE* (*fopen_fn)(const char*, const char*);
typedef FILE* (*freopen_fn)(const char*, const char*, FILE*);
typedef int (*rename_fn)(const char*, const char*);
typedef int (*renameat_fn)(int, const char*, int, const char*);
typedef int (*renameat2_fn)(int, const char*, int, const char*, unsigned int);
typedef int (*unlink_fn)(const char*);
typedef int (*unlinkat_fn)(int, const char*, int);
typedef int (*remove_fn)(const char*);
typedef int (*symlink_fn)(const char*, const char*);
typedef int (*symlinkat_fn)(const char*, int, const char*);
typedef int (*link_fn)(const char*, const char*);
typedef int (*linkat_fn)(int, const char*, int, const char*, int);

static open_fn real_open;
static open_fn real_open64;
static openat_fn real_openat;
static openat_fn real_openat64;
static creat_fn real_creat;
static creat_fn real_creat64;
static fopen_fn real_fopen;
static fopen_fn real_fopen64;
static freopen_fn real_freopen;
static freopen_fn real_freopen64;
static rename_fn real_rename;
static renameat_fn real_renameat;
static renameat2_fn real_renameat2;
static unlink_fn real_unlink;
static unlinkat_fn real_unlinkat;
static remove_fn real_remove;
static symlink_fn real_symlink;
static symlinkat_fn real_symlinkat;
static link_fn real_link;
static linkat_fn real_linkat;

static int g_log_fd = -1;
static pid_t g_log_pid = 0; /* pid the current header events were emitted for */
static unsigned long g_seq = 0;

static void* must_sym(const char* name) {
  void* fn = dlsym(RTLD_NEXT, name);
  return fn;
}

static void resolve_all(void) {
  if (real_open) return;
  real_open = (open_fn)must_sym("open");
  real_open64 = (open_fn)must_sym("open64");
  real_openat = (openat_fn)must_sym("openat");
  real_openat64 = (openat_fn)must_sym("openat64");
  real_creat = (creat_fn)must_sym("creat");
  real_creat64 = (creat_fn)must_sym("creat64");
  real_fopen = (fopen_fn)must_sym("fopen");
  real_fopen64 = (fopen_fn)must_sym("fopen64");
  real_freopen = (freopen_fn)must_sym("freopen");
  real_freopen64 = (freopen_fn)must_sym("freopen64");
  real_rename = (rename_fn)must_sym("rename");
  real_renameat = (renameat_fn)must_sym("renameat");
  real_renameat2 = (renameat2_fn)must_sym("renameat2");
  real_unlink = (unlink_fn)must_sym("unlink");
  real_unlinkat = (unlinkat_fn)must_sym("unlinkat");
  real_remove = (remove_fn)must_sym("remove");
  real_symlink = (symlink_fn)must_sym("symlink");
  real_symlinkat = (symlinkat_fn)must_sym("symlinkat");
  real_link = (link_fn)must_sym("link");
  real_linkat = (linkat_fn)must_sym("linkat");
}

/* Appends src escaped (\t, \n, \\) to dst, bounded by cap. */
static size_t append_escaped(char* dst, size_t pos, size_t cap,
                             const char* src) {
  for (const char* p = src; *p && pos + 2 < cap; ++p) {
    if (*p == '\\' || *p == '\t' || *p == '\n') {
      dst[pos++] = '\\';
      dst[pos++] = (*p == '\\') ? '\\' : (*p == '\t' ? 't' : 'n');
    } else {
      dst[pos++] = *p;
    }
  }
  return pos;
}

static size_t append_raw(char* dst, size_t pos, size_t cap, const char* src) {
  for (const char* p = src; *p && pos < cap; ++p) dst[pos++] = *p;
  return pos;
}

static size_t append_num(char* dst, size_t pos, size_t cap,
                         unsigned long value) {
  char tmp[24];
  int n = 0;
  do {
    tmp[n++] = (char)('0' + value % 10);
    value /= 10;
  } while (value > 0 && n < (int)sizeof(tmp));
  while (n > 0 && pos < cap) dst[pos++] = tmp[--n];
  return pos;
}

static void emit_line(char op, const char* field1, const char* field2);

/* Emits the S and X records for this pid. Called lazily so that forked
 * children (which skip the constructor) are announced before their first
 * file operation. */
static void announce_process(void) {
  char cwd[PATH_MAX];
  if (!getcwd(cwd, sizeof(cwd))) cwd[0] = '\0';
  emit_line('S', cwd[0] ? cwd : "-", NULL);

  char cmdline[4096];
  int fd = (int)syscall(SYS_openat, AT_FDCWD, "/proc/self/cmdline",
                        O_RDONLY | O_CLOEXEC, 0);
  if (fd >= 0) {
    ssize_t n = read(fd, cmdline, sizeof(cmdline) - 1);
    syscall(SYS_close, fd);
    if (n > 0) {
      /* argv strings are NUL separated; join with spaces. */
      for (ssize_t i = 0; i < n - 1; ++i) {
        if (cmdline[i] == '\0') cmdline[i] = ' ';
      }
      cmdline[n - 1] = '\0';
      emit_line('X', cmdline, NULL);
    }
  }
}

static void emit_line(char op, const char* field1, const char* field2) {
  const char* out_path = getenv("DEPSENTRY_TRACE_OUT");
  if (!out_path || !out_path[0]) return;

  pid_t pid = getpid();
  if (g_log_pid != pid) {
    /* New process image or forked child: reopen the log and, unless this
     * very call is the announcement, announce first. */
    if (g_log_fd >= 0) syscall(SYS_close, g_log_fd);
    g_log_fd = (int)syscall(SYS_openat, AT_FDCWD, out_path,
                            O_WRONLY | O_APPEND | O_CLOEXEC, 0);
    if (g_log_fd < 0) return;
    pid_t previous = g_log_pid;
    g_log_pid = pid;
    g_seq = 0;
    if (op != 'S' && op != 'X') {
      (void)previous;
      announce_process();
    }
  }
  if (g_log_fd < 0) return;

  char line[8192];
  size_t pos = 0;
  pos = append_num(line, pos, sizeof(line) - 2,
                   __atomic_add_fetch(&g_seq, 1, __ATOMIC_RELAXED));
  if (pos < sizeof(line) - 2) line[pos++] = '\t';
  pos = append_num(line, pos, sizeof(line) - 2, (unsigned long)pid);
  if (pos < sizeof(line) - 2) line[pos++] = '\t';
  pos = append_num(line, pos, sizeof(line) - 2, (unsigned long)getppid());
  if (pos < sizeof(line) - 2) line[pos++] = '\t';
  if (pos < sizeof(line) - 2) line[pos++] = op;
  if (pos < sizeof(line) - 2) line[pos++] = '\t';
  pos = append_escaped(line, pos, sizeof(line) - 2, field1);
  if (field2) {
    if (pos < sizeof(line) - 2) line[pos++] = '\t';
    pos = append_escaped(line, pos, sizeof(line) - 2, field2);
  }
  line[pos++] = '\n';
  syscall(SYS_write, g_log_fd, line, pos);
}

/* Resolves `path` relative to `dirfd` (or the cwd) textually into buf.
 * Returns buf, or the original path when it is already absolute. */
static const char* abs_path(int dirfd, const char* path, char* buf,
                            size_t cap) {
  if (!path || path[0] == '/') return path;
  if (dirfd == AT_FDCWD) {
    if (!getcwd(buf, cap)) return path;
  } else {
    char proc[64];
    snprintf(proc, sizeof(proc), "/proc/self/fd/%d", dirfd);
    ssize_t n = readlink(proc, buf, cap - 1);
    if (n <= 0) return path;
    buf[n] = '\0';
  }
  size_t len = strlen(buf);
  if (len + 1 + strlen(path) + 1 >= cap) return path;
  buf[len] = '/';
  strcpy(buf + len + 1, path);
  return buf;
}

static void log_path_op(char op, int dirfd, const char* path) {
  char buf[PATH_MAX * 2];
  emit_line(op, abs_path(dirfd, path, buf, sizeof(buf)), NULL);
}

static void log_rename(int olddirfd, const char* oldpath, int newdirfd,
                       const char* newpath) {
  char buf1[PATH_MAX * 2];
  char buf2[PATH_MAX * 2];
  const char* a = abs_path(olddirfd, oldpath, buf1, sizeof(buf1));
  const char* b = abs_path(newdirfd, newpath, buf2, sizeof(buf2));
  emit_line('N', a, b);
}

/* Classifies an open and logs R / W / C. `existed` must be sampled before
 * the real call. */
static void log_open(int dirfd, const char* path, int flags, int existed) {
  int accmode = flags & O_ACCMODE;
  char op;
  if (accmode == O_RDONLY) {
    op = 'R';
  } else if ((flags & O_CREAT) && !existed) {
    op = 'C';
  } else {
    op = 'W';
  }
  log_path_op(op, dirfd, path);
}

static int path_exists(int dirfd, const char* path) {
  struct stat st;
  return syscall(SYS_newfstatat, dirfd, path, &st, 0) == 0;
}

__attribute__((constructor)) static void shim_init(void) {
  resolve_all();
  announce_process();
}

__attribute__((destructor)) static void shim_fini(void) {
  emit_line('E', "-", NULL);
}

int open(const char* path, int flags, ...) {
  resolve_all();
  mode_t mode = 0;
  if (flags & O_CREAT) {
    va_list ap;
    va_start(ap, flags);
    mode = va_arg(ap, mode_t);
    va_end(ap);
  }
  int existed = path_exists(AT_FDCWD, path);
  int fd = real_open(path, flags, mode);
  if (fd >= 0) log_open(AT_FDCWD, path, flags, existed);
  return fd;
}

int open64(const char* path, int flags, ...) {
  resolve_all();
  mode_t mode = 0;
  if (flags & O_CREAT) {
    va_list ap;
    va_start(ap, flags);
    mode = va_arg(ap, mode_t);
    va_end(ap);
  }
  int existed = path_exists(AT_FDCWD, path);
  int fd = real_open64(path, flags, mode);
  if (fd >= 0) log_open(AT_FDCWD, path, flags, existed);
  return fd;
}

int openat(int dirfd, const char* path, int flags, ...) {
  resolve_all();
  mode_t mode = 0;
  if (flags & O_CREAT) {
    va_list ap;
    va_start(ap, flags);
    mode = va_arg(ap, mode_t);
    va_end(ap);
  }
  int existed = path_exists(dirfd, path);
  int fd = real_openat(dirfd, path, flags, mode);
  if (fd >= 0) log_open(dirfd, path, flags, existed);
  return fd;
}

int openat64(int dirfd, const char* path, int flags, ...) {
  resolve_all();
  mode_t mode = 0;
  if (flags & O_CREAT) {
    va_list ap;
    va_start(ap, flags);
    mode = va_arg(ap, mode_t);
    va_end(ap);
  }
  int existed = path_exists(dirfd, path);
  int fd = real_openat64 ? real_openat64(dirfd, path, flags, mode)
                         : real_openat(dirfd, path, flags, mode);
  if (fd >= 0) log_open(dirfd, path, flags, existed);
  return fd;
}

int creat(const char* path, mode_t mode) {
  resolve_all();
  int existed = path_exists(AT_FDCWD, path);
  int fd = real_creat(path, mode);
  if (fd >= 0) log_path_op(existed ? 'W' : 'C', AT_FDCWD, path);
  return fd;
}

int creat64(const char* path, mode_t mode) {
  resolve_all();
  int existed = path_exists(AT_FDCWD, path);
  int fd = real_creat64 ? real_creat64(path, mode) : real_creat(path, mode);
  if (fd >= 0) log_path_op(existed ? 'W' : 'C', AT_FDCWD, path);
  return fd;
}

static void log_fopen_mode(const char* path, const char* mode, int existed) {
  char op;
  if (mode[0] == 'r' && !strchr(mode, '+')) {
    op = 'R';
  } else if (mode[0] == 'r') {
    op = 'W'; /* r+: update in place */
  } else {
    op = existed ? 'W' : 'C'; /* w, a and their + variants */
  }
  log_path_op(op, AT_FDCWD, path);
}

FILE* fopen(const char* path, const char* mode) {
  resolve_all();
  int existed = path_exists(AT_FDCWD, path);
  FILE* f = real_fopen(path, mode);
  if (f) log_fopen_mode(path, mode, existed);
  return f;
}

FILE* fopen64(const char* path, const char* mode) {
  resolve_all();
  int existed = path_exists(AT_FDCWD, path);
  FILE* f = real_fopen64 ? real_fopen64(path, mode) : real_fopen(path, mode);
  if (f) log_fopen_mode(path, mode, existed);
  return f;
}

FILE* freopen(const char* path, const char* mode, FILE* stream) {
  resolve_all();
  int existed = path ? path_exists(AT_FDCWD, path) : 1;
  FILE* f = real_freopen(path, mode, stream);
  if (f && path) log_fopen_mode(path, mode, existed);
  return f;
}

FILE* freopen64(const char* path, const char* mode, FILE* stream) {
  resolve_all();
  int existed = path ? path_exists(AT_FDCWD, path) : 1;
  FILE* f = real_freopen64 ? real_freopen64(path, mode, stream)
                           : real_freopen(path, mode, stream);
  if (f && path) log_fopen_mode(path, mode, existed);
  return f;
}

int rename(const char* oldpath, const char* newpath) {
  resolve_all();
  int ret = real_rename(oldpath, newpath);
  if (ret == 0) log_rename(AT_FDCWD, oldpath, AT_FDCWD, newpath);
  return ret;
}

int renameat(int olddirfd, const char* oldpath, int newdirfd,
             const char* newpath) {
  resolve_all();
  int ret = real_renameat(olddirfd, oldpath, newdirfd, newpath);
  if (ret == 0) log_rename(olddirfd, oldpath, newdirfd, newpath);
  return ret;
}

int renameat2(int olddirfd, const char* oldpath, int newdirfd,
              const char* newpath, unsigned int flags) {
  resolve_all();
  if (!real_renameat2) {
    errno = ENOSYS;
    return -1;
  }
  int ret = real_renameat2(olddirfd, oldpath, newdirfd, newpath, flags);
  if (ret == 0) log_rename(olddirfd, oldpath, newdirfd, newpath);
  return ret;
}

int unlink(const char* path) {
  resolve_all();
  int ret = real_unlink(path);
  if (ret == 0) log_path_op('D', AT_FDCWD, path);
  return ret;
}

int unlinkat(int dirfd, const char* path, int flags) {
  resolve_all();
  int ret = real_unlinkat(dirfd, path, flags);
  if (ret == 0 && !(flags & AT_REMOVEDIR)) log_path_op('D', dirfd, path);
  return ret;
}

int remove(const char* path) {
  resolve_all();
  struct stat st;
  int is_dir = (syscall(SYS_newfstatat, AT_FDCWD, path, &st, 0) == 0) &&
               S_ISDIR(st.st_mode);
  int ret = real_remove(path);
  if (ret == 0 && !is_dir) log_path_op('D', AT_FDCWD, path);
  return ret;
}

int symlink(const char* target, const char* linkpath) {
  resolve_all();
  int ret = real_symlink(target, linkpath);
  if (ret == 0) {
    /* The link consumes its target (resolved against the link's directory
     * when relative) and produces the link path. */
    char buf[PATH_MAX * 2];
    const char* abs_link = abs_path(AT_FDCWD, linkpath, buf, sizeof(buf));
    if (target[0] == '/') {
      emit_line('R', target, NULL);
    } else {
      char tbuf[PATH_MAX * 2];
      size_t len = strlen(abs_link);
      const char* slash = strrchr(abs_link, '/');
      size_t dirlen = slash ? (size_t)(slash - abs_link) : len;
      if (dirlen + 1 + strlen(target) + 1 < sizeof(tbuf)) {
        memcpy(tbuf, abs_link, dirlen);
        tbuf[dirlen] = '/';
        strcpy(tbuf + dirlen + 1, target);
        emit_line('R', tbuf, NULL);
      }
    }
    emit_line('C', abs_link, NULL);
  }
  return ret;
}

int symlinkat(const char* target, int newdirfd, const char* linkpath) {
  resolve_all();
  int ret = real_symlinkat(target, newdirfd, linkpath);
  if (ret == 0) {
    char buf[PATH_MAX * 2];
    const char* abs_link = abs_path(newdirfd, linkpath, buf, sizeof(buf));
    emit_line('C', abs_link, NULL);
  }
  return ret;
}

int link(const char* oldpath, const char* newpath) {
  resolve_all();
  int ret = real_link(oldpath, newpath);
  if (ret == 0) {
    log_path_op('R', AT_FDCWD, oldpath);
    log_path_op('C', AT_FDCWD, newpath);
  }
  return ret;
}

int linkat(int olddirfd, const char* oldpath, int newdirfd,
           const char* newpath, int flags) {
  resolve_all();
  int ret = real_linkat(olddirfd, oldpath, newdirfd, newpath, flags);
  if (ret == 0) {
    log_path_op('R', olddirfd, oldpath);
    log_path_op('C', newdirfd, newpath);
  }
  return ret;
}
