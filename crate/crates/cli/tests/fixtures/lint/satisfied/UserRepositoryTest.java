package fixtures;

import static org.assertj.core.api.Assertions.assertThat;

import java.util.Arrays;
import org.junit.jupiter.api.Test;

class UserRepositoryTest {
    @Test
    void findAllWithGivenIds() {
        Iterable<User> users = repository.findAll(Arrays.asList(1L, 2L));
        assertThat(users).hasSize(2);
    }
}
